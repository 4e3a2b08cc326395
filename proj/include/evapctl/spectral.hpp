#pragma once

#include <memory>
#include <vector>

#include "evapctl/grid.hpp"

namespace evapctl {

/// Trigonometric eigenbasis of the periodic 5-point Laplacian on one grid.
///
/// Mode (kx, ky) has discrete eigenvalue
///   -lambda_h = -(2/hx^2)(1 - cos(2 pi kx / nx)) - (2/hy^2)(1 - cos(2 pi ky / ny))
/// and continuous wavenumber kappa = 2 pi (kx'/Lx, ky'/Ly), with kx' the signed
/// frequency (kx' = kx for kx <= nx/2, kx - nx otherwise).
///
/// Backed by FFTW r2c/c2r plans created once per grid shape. Instances are
/// immutable and may be shared across threads; each call allocates its own
/// work arrays.
class Spectral {
 public:
  /// Cached instance for this grid shape (plan creation is serialized).
  static std::shared_ptr<const Spectral> for_grid(const Grid& grid);

  explicit Spectral(const Grid& grid);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const Grid& grid() const noexcept { return grid_; }

  /// Solves (I - tau * Lap_h) u = rhs exactly (diagonal in the eigenbasis).
  Field solve_shifted(const Field& rhs, double tau) const;

  /// Discrete Laplacian eigenvalue lambda_h >= 0 of mode (kx, ky), kx in [0, nx), ky in [0, ny).
  double laplacian_eigenvalue(int kx, int ky) const;

  /// |Omega| * sum_k |c_k|^2 / (1 + |kappa_k|^2), c_k = DFT(f)_k / (nx ny).
  /// Parseval: replacing the multiplier by 1 gives sum f^2 hx hy.
  double h_minus_1_squared(const Field& f) const;

  /// Periodic convolution via the transform: out(p) = hx hy sum_q k(p - q) f(q).
  Field convolve(const Field& k, const Field& f) const;

 private:
  struct Plans;
  Grid grid_;
  std::unique_ptr<Plans> plans_;
  std::vector<double> eig_x_;
  std::vector<double> eig_y_;
};

}  // namespace evapctl
