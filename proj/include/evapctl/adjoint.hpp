#pragma once

#include <vector>

#include "evapctl/forward.hpp"
#include "evapctl/sensitivity.hpp"

namespace evapctl {

// Quadrature alignment used throughout this header (and nowhere else):
//   misfit   : states n = 1..nt       (right endpoint)
//   control  : slices n = 0..nt-1     (left endpoint; slice n drives step n -> n+1)
//   adjoint  : gamma_n, n = 0..nt, gamma_nt = 0; gamma2_n pairs with theta_n.

/// Target phi_d on every state node n = 0..nt.
using Target = std::vector<Field>;

/// Expands a time-constant target to nt + 1 nodes.
Target constant_target(const Field& phi_d, int nt);

struct CostBreakdown {
  double misfit = 0.0;  ///< 1/2 sum_{n=1}^{nt} ||phi_n - phi_d,n||^2 dt
  double reg = 0.0;     ///< delta/2 sum_{n=0}^{nt-1} ||theta_n||^2 dt
  double total() const noexcept { return misfit + reg; }
};

/// Throws Error(ShapeMismatch) if the target, trajectory and control lengths disagree.
CostBreakdown cost(const Trajectory& traj, const ControlField& theta, const Target& phi_d, double delta);

struct AdjointTrajectory {
  std::vector<Field> gamma1;
  std::vector<Field> gamma2;
};

/// Exact transpose of the tangent sweep with general sources (s1_n, s2_n), n = 1..nt
/// (index 0 ignored):
///   gamma_n = (I - dt Lap_h)^{-1} [ M_{n+1}^T gamma_{n+1} + dt s_{n+1} ],  gamma_nt = 0,
/// where M_k is the explicit part of the tangent step at state k. Satisfies
///   sum_{n=1}^{nt} dt (<phi1_n, s1_n> + <phi2_n, s2_n>) = sum_{n=0}^{nt-1} dt <h_n, gamma2_n>.
AdjointTrajectory solve_adjoint_transpose(const Trajectory& traj, const std::vector<Field>& s1,
                                          const std::vector<Field>& s2, const ModelParams& p);

/// Discrete adjoint of the cost: solve_adjoint_transpose with s1 = 0, s2 = phi - phi_d.
AdjointTrajectory solve_adjoint_discrete(const Trajectory& traj, const Target& phi_d, const ModelParams& p);

/// Reference solve of the continuous adjoint system in reversed time with the same IMEX pattern:
///   -d_t g1 = Lap g1 - 4b m F.grad g1 + 2b(phi - m^2)(gJ * grad g1) + 2b(1-phi) F.grad g2
///             + 2b m(1-phi)(gJ * grad g2)
///   -d_t g2 = Lap g2 - 2b F.grad g1 - 2b m F.grad g2 - alpha g2 + (phi - phi_d)
/// Nonlocal coefficients sit outside the convolution, gJ * grad g = sum_i d_iJ * d_i g.
AdjointTrajectory solve_adjoint_continuous(const Trajectory& traj, const Target& phi_d, const ModelParams& p);

/// Inverse of the discrete adjoint's source map: the target for which solve_adjoint_discrete
/// along `traj` returns the prescribed gamma2_n, n = 0..nt-1. Used to build problems with a
/// known optimum (pick theta*, choose gamma2 satisfying the first-order condition).
Target manufacture_target(const Trajectory& traj, const std::vector<Field>& gamma2, const ModelParams& p);
/// g_n = gamma2_n + delta theta_n, n = 0..nt-1: the Riesz representative of DJ(theta)
/// under the pairing sum_n <g_n, h_n> dt.
std::vector<Field> reduced_gradient(const AdjointTrajectory& adj, const ControlField& theta, double delta);

/// Pointwise clamp to [theta_min, theta_max].
ControlField project_admissible(const ControlField& theta);
std::vector<Field> project_admissible(const std::vector<Field>& slices, double lo, double hi);

/// ||theta - P(theta - s_ref g)||_{L2(S x Omega)}; zero iff the discrete variational inequality holds.
double stationarity_residual(const ControlField& theta, const std::vector<Field>& g, double dt, double s_ref = 1.0);

/// ||theta - P(-gamma2 / delta)||_{L2(S x Omega)}. Throws Error(DeltaZero) when delta == 0.
double projection_characterization_check(const ControlField& theta, const AdjointTrajectory& adj, double delta,
                                         double dt);

/// Space-time pairing sum_n <a_n, b_n> dt over matching slice ranges.
double spacetime_inner(const std::vector<Field>& a, const std::vector<Field>& b, double dt, std::size_t first = 0);

}  // namespace evapctl
