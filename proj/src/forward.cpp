#include "evapctl/forward.hpp"

#include <algorithm>
#include <cmath>

#include "evapctl/errors.hpp"

namespace evapctl {

InitData InitData::make(Field m0, Field phi0) {
  require_same_grid(m0.grid(), phi0.grid());
  if (!m0.all_finite() || !phi0.all_finite()) throw ValidationError("init", "initial data must be finite");
  for (std::size_t k = 0; k < m0.size(); ++k) {
    const double am = std::abs(m0[k]);
    const double ap = std::abs(phi0[k]);
    if (am > ap) throw ValidationError("init.m0", "(A2) requires |m0| <= |phi0| pointwise");
    if (ap > 1.0) throw ValidationError("init.phi0", "(A2) requires |phi0| <= 1 pointwise");
  }
  return InitData{std::move(m0), std::move(phi0)};
}

State step_state(const Field& m, const Field& phi, const Field& theta, const ModelParams& p, int step) {
  require_same_grid(m.grid(), p.grid);
  require_same_grid(phi.grid(), p.grid);
  require_same_grid(theta.grid(), p.grid);
  const double dt = p.dt;
  const double b2 = 2.0 * p.beta;

  const VectorField drift = p.kernel->conv_grad(m);
  const Field a = b2 * (phi - m * m);
  const Field b = b2 * (m * (1.0 - phi));

  Field rhs_m = m;
  rhs_m.axpy(-dt, div(a * drift));

  Field rhs_phi = phi;
  rhs_phi.axpy(-dt, div(b * drift));
  rhs_phi.axpy(dt, p.alpha * (1.0 - phi) + theta);

  State next{p.spectral->solve_shifted(rhs_m, dt), p.spectral->solve_shifted(rhs_phi, dt)};
  if (!next.m.all_finite() || !next.phi.all_finite())
    throw NonFiniteError(step, "state blew up; dt may exceed the stability bound");
  return next;
}

Trajectory solve_state(const InitData& init, const ControlField& theta, const ModelParams& p) {
  if (theta.nt() != p.nt) throw Error(ErrorKind::ShapeMismatch, "control must have nt slices");
  Trajectory traj;
  traj.theta = theta;
  traj.times.reserve(p.nt + 1);
  traj.m.reserve(p.nt + 1);
  traj.phi.reserve(p.nt + 1);
  traj.times.push_back(0.0);
  traj.m.push_back(init.m0);
  traj.phi.push_back(init.phi0);
  for (int n = 0; n < p.nt; ++n) {
    State s = step_state(traj.m[n], traj.phi[n], theta.slices[n], p, n);
    traj.times.push_back((n + 1) * p.dt);
    traj.m.push_back(std::move(s.m));
    traj.phi.push_back(std::move(s.phi));
  }
  return traj;
}

WeakResidual weak_residual(const Trajectory& traj, const Field& psi, const Field& eta, const ModelParams& p) {
  const double dt = p.dt;
  const double b2 = 2.0 * p.beta;
  const VectorField gpsi = grad(psi);
  const VectorField geta = grad(eta);
  WeakResidual out;
  for (int n = 0; n < traj.nt(); ++n) {
    const Field& m = traj.m[n];
    const Field& phi = traj.phi[n];
    const Field& m1 = traj.m[n + 1];
    const Field& phi1 = traj.phi[n + 1];
    const VectorField drift = p.kernel->conv_grad(m);

    const double rm = inner(m1 - m, psi) / dt + dirichlet_form(m1, psi) -
                      inner(b2 * (phi - m * m) * drift, gpsi);
    const double rp = inner(phi1 - phi, eta) / dt + dirichlet_form(phi1, eta) -
                      inner(b2 * (m * (1.0 - phi)) * drift, geta) -
                      inner(p.alpha * (1.0 - phi) + traj.theta.slices[n], eta);
    out.res_m += std::abs(rm) * dt;
    out.res_phi += std::abs(rp) * dt;
  }
  return out;
}

NormReport apriori_norms(const Trajectory& traj, double dt) {
  NormReport r;
  r.m_l2_h1 = state_l2_h1(traj.m, dt);
  r.phi_l2_h1 = state_l2_h1(traj.phi, dt);
  double am = 0.0;
  double ap = 0.0;
  for (int n = 1; n <= traj.nt(); ++n) {
    const double hm = norms((traj.m[n] - traj.m[n - 1]) * (1.0 / dt)).h_minus_1;
    const double hp = norms((traj.phi[n] - traj.phi[n - 1]) * (1.0 / dt)).h_minus_1;
    am += dt * hm * hm;
    ap += dt * hp * hp;
  }
  r.dm_l2_hm1 = std::sqrt(am);
  r.dphi_l2_hm1 = std::sqrt(ap);
  return r;
}

double lipschitz_probe(const InitData& init, const ControlField& theta1, const ControlField& theta2,
                       const ModelParams& p) {
  const double denom = control_l2(subtract(theta1.slices, theta2.slices), p.dt);
  if (denom < 1e-14) throw Error(ErrorKind::DegenerateProbe, "controls coincide");
  const Trajectory a = solve_state(init, theta1, p);
  const Trajectory b = solve_state(init, theta2, p);
  const double num = state_l2_h1(subtract(a.m, b.m), p.dt) + state_l2_h1(subtract(a.phi, b.phi), p.dt);
  return num / denom;
}

BoundsReport bounds_check(const Field& m, const Field& phi) {
  BoundsReport r;
  for (std::size_t k = 0; k < m.size(); ++k) {
    r.max_viol_m = std::max(r.max_viol_m, std::abs(m[k]) - std::abs(phi[k]));
    r.max_viol_order = std::max(r.max_viol_order, std::abs(phi[k]) - 1.0);
  }
  return r;
}

BoundsReport bounds_check(const Trajectory& traj) {
  BoundsReport r;
  for (int n = 0; n <= traj.nt(); ++n) {
    const BoundsReport s = bounds_check(traj.m[n], traj.phi[n]);
    r.max_viol_m = std::max(r.max_viol_m, s.max_viol_m);
    r.max_viol_order = std::max(r.max_viol_order, s.max_viol_order);
  }
  return r;
}

}  // namespace evapctl
