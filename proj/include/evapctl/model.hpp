#pragma once

#include <memory>
#include <vector>

#include "evapctl/grid.hpp"
#include "evapctl/kernel.hpp"
#include "evapctl/spectral.hpp"

namespace evapctl {

/// Physical and discretization parameters shared by the forward, tangent and adjoint sweeps.
struct ModelParams {
  Grid grid;
  double beta = 1.0;   ///< inverse temperature
  double alpha = 0.0;  ///< evaporation rate
  double T = 1.0;
  double dt = 1e-3;
  int nt = 0;
  std::shared_ptr<const Kernel> kernel;
  std::shared_ptr<const Spectral> spectral;

  /// Validates beta >= 0, alpha >= 0, dt > 0 and nt * dt == T (relative 1e-12).
  /// Throws ValidationError naming the offending key.
  static ModelParams make(const Grid& grid, double beta, double alpha, double T, double dt,
                          std::shared_ptr<const Kernel> kernel);

  /// h^2 / (4 V h + 2 R h^2) with h = min(hx, hy), V = 2 beta ||grad J||_L1, R = alpha.
  /// Sufficient (and conservative) for the explicit drift and reaction.
  double stability_dt_bound() const;
};

/// Time-indexed control theta_n, n = 0..nt-1 (slice n drives step n -> n+1), with box bounds.
struct ControlField {
  std::vector<Field> slices;
  double theta_min = 0.0;
  double theta_max = 0.0;

  ControlField() = default;
  ControlField(std::vector<Field> s, double lo, double hi);
  /// nt copies of `value`, bounds [lo, hi].
  static ControlField constant(const Grid& grid, int nt, double value, double lo, double hi);

  int nt() const noexcept { return static_cast<int>(slices.size()); }
};

/// sqrt(sum_{n=0}^{nt-1} dt ||theta_n||^2): left-endpoint quadrature of the control.
double control_l2(const std::vector<Field>& slices, double dt);
/// Pointwise a - b for two slice sequences of equal shape.
std::vector<Field> subtract(const std::vector<Field>& a, const std::vector<Field>& b);

/// sqrt(sum_{n=1}^{N} dt ||u_n||^2): right-endpoint quadrature of a state series u_0..u_N.
double state_l2(const std::vector<Field>& series, double dt);
/// sqrt(sum_{n=1}^{N} dt h1(u_n)^2), the discrete L2(S; H1) norm.
double state_l2_h1(const std::vector<Field>& series, double dt);

}  // namespace evapctl
