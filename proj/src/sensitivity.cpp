#include "evapctl/sensitivity.hpp"

#include <cmath>

#include "evapctl/errors.hpp"

namespace evapctl {

TangentState step_linearized(const Field& m_hat, const Field& phi_hat, const Field& phi1, const Field& phi2,
                             const Field& h, const ModelParams& p, int step) {
  const double dt = p.dt;
  const double b2 = 2.0 * p.beta;
  const VectorField drift = p.kernel->conv_grad(m_hat);
  const VectorField dphi1 = p.kernel->conv_grad(phi1);

  // derivative of 2b (phi - m^2) F
  const VectorField flux_m =
      b2 * (phi2 - 2.0 * (m_hat * phi1)) * drift + b2 * (phi_hat - m_hat * m_hat) * dphi1;
  // derivative of 2b m (1 - phi) F
  const Field one_minus = 1.0 - phi_hat;
  const VectorField flux_phi = b2 * (m_hat * one_minus) * dphi1 + b2 * (phi1 * one_minus) * drift -
                               b2 * (phi2 * m_hat) * drift;

  Field rhs1 = phi1;
  rhs1.axpy(-dt, div(flux_m));
  Field rhs2 = phi2;
  rhs2.axpy(-dt, div(flux_phi));
  rhs2.axpy(dt, h - p.alpha * phi2);

  TangentState out{p.spectral->solve_shifted(rhs1, dt), p.spectral->solve_shifted(rhs2, dt)};
  if (!out.phi1.all_finite() || !out.phi2.all_finite()) throw NonFiniteError(step, "tangent blew up");
  return out;
}

TangentTrajectory solve_linearized(const Trajectory& traj, const std::vector<Field>& h, const ModelParams& p) {
  if (static_cast<int>(h.size()) != traj.nt()) throw Error(ErrorKind::ShapeMismatch, "direction needs nt slices");
  TangentTrajectory t;
  t.direction = h;
  t.phi1.reserve(traj.nt() + 1);
  t.phi2.reserve(traj.nt() + 1);
  t.phi1.emplace_back(p.grid);
  t.phi2.emplace_back(p.grid);
  for (int n = 0; n < traj.nt(); ++n) {
    TangentState s = step_linearized(traj.m[n], traj.phi[n], t.phi1[n], t.phi2[n], h[n], p, n);
    t.phi1.push_back(std::move(s.phi1));
    t.phi2.push_back(std::move(s.phi2));
  }
  return t;
}

namespace {

double pair_l2(const std::vector<Field>& a, const std::vector<Field>& b, double dt) {
  const double x = state_l2(a, dt);
  const double y = state_l2(b, dt);
  return std::sqrt(x * x + y * y);
}

ControlField shifted(const ControlField& theta, const std::vector<Field>& h, double eps) {
  ControlField out = theta;
  for (std::size_t n = 0; n < out.slices.size(); ++n) out.slices[n].axpy(eps, h[n]);
  return out;
}

}  // namespace

TaylorReport taylor_test(const InitData& init, const ControlField& theta, const std::vector<Field>& h,
                         const ModelParams& p, const std::vector<double>& eps_ladder) {
  if (eps_ladder.size() < 3) throw Error(ErrorKind::LadderTooShort, "need at least 3 eps values");
  const Trajectory base = solve_state(init, theta, p);
  const TangentTrajectory tan = solve_linearized(base, h, p);

  TaylorReport r;
  r.eps = eps_ladder;
  r.tangent_norm = pair_l2(tan.phi1, tan.phi2, p.dt);
  for (double eps : eps_ladder) {
    const Trajectory pert = solve_state(init, shifted(theta, h, eps), p);
    std::vector<Field> dm = subtract(pert.m, base.m);
    std::vector<Field> dphi = subtract(pert.phi, base.phi);
    r.first_order.push_back(pair_l2(dm, dphi, p.dt) / eps);
    for (std::size_t n = 0; n < dm.size(); ++n) {
      dm[n].axpy(-eps, tan.phi1[n]);
      dphi[n].axpy(-eps, tan.phi2[n]);
    }
    r.remainder.push_back(pair_l2(dm, dphi, p.dt));
  }
  for (std::size_t i = 0; i + 1 < r.eps.size(); ++i)
    r.orders.push_back(std::log(r.remainder[i] / r.remainder[i + 1]) / std::log(r.eps[i] / r.eps[i + 1]));
  return r;
}

}  // namespace evapctl
