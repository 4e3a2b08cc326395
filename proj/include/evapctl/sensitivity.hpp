#pragma once

#include <vector>

#include "evapctl/forward.hpp"

namespace evapctl {

/// Tangent of the forward map along a control direction: (phi1_n, phi2_n) = d(m_n, phi_n)[h].
struct TangentTrajectory {
  std::vector<Field> phi1;
  std::vector<Field> phi2;
  std::vector<Field> direction;
};

struct TangentState {
  Field phi1;
  Field phi2;
};

/// Exact derivative of step_state at (m_hat, phi_hat) applied to (phi1, phi2, h):
///   (I - dt Lap_h) phi1+ = phi1 - dt div(2b[(phi2 - 2 m phi1) F + (phi - m^2) gJ*phi1])
///   (I - dt Lap_h) phi2+ = phi2 - dt div(2b[m(1-phi) gJ*phi1 + phi1(1-phi) F - phi2 m F])
///                          + dt(-alpha phi2 + h)
/// with F = gJ * m_hat.
TangentState step_linearized(const Field& m_hat, const Field& phi_hat, const Field& phi1, const Field& phi2,
                             const Field& h, const ModelParams& p, int step = 0);

/// Zero initial tangent, marched along the stored forward states.
TangentTrajectory solve_linearized(const Trajectory& traj, const std::vector<Field>& h, const ModelParams& p);

struct TaylorReport {
  std::vector<double> eps;
  std::vector<double> remainder;      ///< ||S(theta + eps h) - S(theta) - eps DS h||
  std::vector<double> orders;         ///< log(r_i / r_{i+1}) / log(eps_i / eps_{i+1})
  std::vector<double> first_order;    ///< ||S(theta + eps h) - S(theta)|| / eps
  double tangent_norm = 0.0;          ///< ||DS h||
};

/// Remainder ladder for the control-to-state map. Norm is the discrete L2(S x Omega)
/// over both state components. Throws Error(LadderTooShort) for fewer than 3 rungs.
TaylorReport taylor_test(const InitData& init, const ControlField& theta, const std::vector<Field>& h,
                         const ModelParams& p, const std::vector<double>& eps_ladder);

}  // namespace evapctl
