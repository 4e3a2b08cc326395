#pragma once

// Raw data-parallel loops behind the Field operators.
//
// Each kernel exists twice: `serial` is the reference implementation kept for
// testing, `parallel` distributes the outer (row) loop with OpenMP. Every output
// element is computed by the same arithmetic in both, so results are
// bit-identical regardless of thread count. Reductions are not parallelized.

#include <cstdint>
#include <span>
#include <vector>

namespace evapctl::kernels {

struct Shape {
  int nx;
  int ny;
  double hx;
  double hy;
};

/// Nonzero taps of a periodic convolution kernel: out(p) = w * sum_s value[s] * f(p - offset[s]).
struct SparseTaps {
  std::vector<int> di;
  std::vector<int> dj;
  std::vector<double> value;

  std::size_t size() const noexcept { return value.size(); }
};

namespace serial {
void grad(const Shape& s, std::span<const double> f, std::span<double> gx, std::span<double> gy);
void div(const Shape& s, std::span<const double> vx, std::span<const double> vy, std::span<double> out);
void laplacian(const Shape& s, std::span<const double> f, std::span<double> out);
void convolve(const Shape& s, const SparseTaps& taps, double weight, std::span<const double> f,
              std::span<double> out);
}  // namespace serial

namespace parallel {
void grad(const Shape& s, std::span<const double> f, std::span<double> gx, std::span<double> gy);
void div(const Shape& s, std::span<const double> vx, std::span<const double> vy, std::span<double> out);
void laplacian(const Shape& s, std::span<const double> f, std::span<double> out);
void convolve(const Shape& s, const SparseTaps& taps, double weight, std::span<const double> f,
              std::span<double> out);
}  // namespace parallel

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

}  // namespace evapctl::kernels
