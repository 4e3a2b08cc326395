#pragma once

#include <vector>

#include "evapctl/grid.hpp"
#include "evapctl/model.hpp"

namespace evapctl {

struct State {
  Field m;
  Field phi;
};

/// Initial data satisfying 0 <= |m0| <= |phi0| <= 1 pointwise.
struct InitData {
  Field m0;
  Field phi0;

  /// Throws ValidationError("init", ...) if the ordering |m0| <= |phi0| <= 1 fails anywhere.
  static InitData make(Field m0, Field phi0);
};

/// Forward run: m[n], phi[n] at t_n = n dt for n = 0..nt; theta holds the nt slices that produced it.
struct Trajectory {
  std::vector<double> times;
  std::vector<Field> m;
  std::vector<Field> phi;
  ControlField theta;

  int nt() const noexcept { return static_cast<int>(m.size()) - 1; }
};

/// One IMEX Euler step:
///   (I - dt Lap_h) m+   = m   - dt div(2 beta (phi - m^2) F)
///   (I - dt Lap_h) phi+ = phi - dt div(2 beta m (1 - phi) F) + dt (alpha (1 - phi) + theta)
/// with F = grad J * m evaluated at the old state.
/// Throws NonFiniteError(step) if the result is not finite.
State step_state(const Field& m, const Field& phi, const Field& theta, const ModelParams& p, int step = 0);

/// Marches step_state nt times and stores every state.
Trajectory solve_state(const InitData& init, const ControlField& theta, const ModelParams& p);

struct WeakResidual {
  double res_m = 0.0;
  double res_phi = 0.0;
};

/// Discrete weak form of the scheme tested against (psi, eta), accumulated as
/// sum_n |r_n| dt. The diffusion pairing uses the forward-difference Dirichlet form,
/// which is the exact summation-by-parts partner of the 5-point Laplacian.
WeakResidual weak_residual(const Trajectory& traj, const Field& psi, const Field& eta, const ModelParams& p);

struct NormReport {
  double m_l2_h1 = 0.0;
  double phi_l2_h1 = 0.0;
  double dm_l2_hm1 = 0.0;    ///< backward-difference surrogate of ||d_t m||_{L2(S;H^-1)}
  double dphi_l2_hm1 = 0.0;  ///< same for phi

  double total() const noexcept { return m_l2_h1 + phi_l2_h1 + dm_l2_hm1 + dphi_l2_hm1; }
};

NormReport apriori_norms(const Trajectory& traj, double dt);

/// (||m1 - m2||_{L2(S;H1)} + ||phi1 - phi2||_{L2(S;H1)}) / ||theta1 - theta2||_{L2(S x Omega)}.
/// Throws Error(DegenerateProbe) if the control difference norm is below 1e-14.
double lipschitz_probe(const InitData& init, const ControlField& theta1, const ControlField& theta2,
                       const ModelParams& p);

struct BoundsReport {
  double max_viol_m = 0.0;      ///< max over space-time of max(|m| - |phi|, 0)
  double max_viol_order = 0.0;  ///< max over space-time of max(|phi| - 1, 0)
};

BoundsReport bounds_check(const Trajectory& traj);
BoundsReport bounds_check(const Field& m, const Field& phi);

}  // namespace evapctl
