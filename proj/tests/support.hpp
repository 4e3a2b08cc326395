#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "evapctl/config.hpp"
#include "evapctl/grid.hpp"
#include "evapctl/kernel.hpp"
#include "evapctl/model.hpp"

namespace evapctl::test {

inline Field random_field(const Grid& g, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Field f(g);
  for (double& v : f.values()) v = d(rng);
  return f;
}

inline VectorField random_vector_field(const Grid& g, std::mt19937_64& rng) {
  return VectorField(random_field(g, rng), random_field(g, rng));
}

inline std::vector<Field> random_slices(const Grid& g, int n, std::mt19937_64& rng, double amp = 1.0) {
  std::vector<Field> out;
  for (int k = 0; k < n; ++k) out.push_back(realize_field("noise:" + std::to_string(amp) + ",2", g, rng));
  return out;
}

inline double rel_diff(double a, double b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

inline double max_diff(const Field& a, const Field& b) { return max_abs(a - b); }

/// Small but nontrivial model: 16x16 unit square, r = 0.2, nt steps of dt.
inline ModelParams small_params(double beta = 1.0, double alpha = 1.0, int n = 16, int nt = 20, double dt = 5e-3,
                                double radius = 0.2) {
  const Grid g(n, n, 1.0, 1.0);
  auto k = std::make_shared<const Kernel>(build_kernel(g, radius));
  return ModelParams::make(g, beta, alpha, nt * dt, dt, k);
}

inline InitData small_init(const Grid& g, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  Field m0 = realize_field("noise:0.2,2", g, rng);
  return InitData::make(std::move(m0), Field(g, 0.5));
}

}  // namespace evapctl::test
