#pragma once

// Dense linear-algebra oracles for the beta = 0 (linear) problems. Everything here is
// assembled explicitly from the stencil definitions, independent of the FFT path.

#include <Eigen/Dense>

#include "evapctl/grid.hpp"

namespace evapctl::test {

/// Matrix of the periodic 5-point Laplacian.
inline Eigen::MatrixXd laplacian_matrix(const Grid& g) {
  const int n = static_cast<int>(g.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  const double ax = 1.0 / (g.hx() * g.hx());
  const double ay = 1.0 / (g.hy() * g.hy());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const auto row = static_cast<int>(g.index(i, j));
      L(row, row) += -2 * ax - 2 * ay;
      L(row, static_cast<int>(g.index(i + 1, j))) += ax;
      L(row, static_cast<int>(g.index(i - 1, j))) += ax;
      L(row, static_cast<int>(g.index(i, j + 1))) += ay;
      L(row, static_cast<int>(g.index(i, j - 1))) += ay;
    }
  return L;
}

inline Eigen::VectorXd to_vec(const Field& f) {
  Eigen::VectorXd v(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) v(static_cast<Eigen::Index>(k)) = f[k];
  return v;
}

inline Field to_field(const Grid& g, const Eigen::VectorXd& v) {
  Field f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = v(static_cast<Eigen::Index>(k));
  return f;
}

}  // namespace evapctl::test
