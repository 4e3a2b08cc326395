#include "evapctl/adjoint.hpp"

#include <algorithm>
#include <cmath>

#include "evapctl/errors.hpp"

namespace evapctl {
namespace {

// Sign of the reaction term in the transposed phi-step. Flipping it is the mutation
// used to prove the gradient check catches a wrong adjoint.
#ifdef EVAPCTL_SABOTAGE_ADJOINT
constexpr double kReactionSign = +1.0;
#else
constexpr double kReactionSign = -1.0;
#endif

struct Pair {
  Field g1;
  Field g2;
};

// M_k^T applied to gamma, M_k being the explicit (pre-solve) part of the tangent step at state k.
Pair transpose_explicit(const Field& m, const Field& phi, const Field& g1, const Field& g2, const ModelParams& p) {
  const double dt = p.dt;
  const double b2 = 2.0 * p.beta;
  const VectorField drift = p.kernel->conv_grad(m);
  const VectorField G1 = grad(g1);
  const VectorField G2 = grad(g2);
  const Field f1 = dot(G1, drift);
  const Field f2 = dot(G2, drift);
  const Field a = b2 * (phi - m * m);
  const Field b = b2 * (m * (1.0 - phi));

  Field out1 = g1;
  out1.axpy(dt, -2.0 * b2 * (m * f1) + b2 * ((1.0 - phi) * f2) + p.kernel->conv_grad_transpose(a * G1) +
                    p.kernel->conv_grad_transpose(b * G2));
  Field out2 = g2;
  out2.axpy(dt, b2 * f1 - b2 * (m * f2) + (kReactionSign * p.alpha) * g2);
  return {std::move(out1), std::move(out2)};
}

// Same sweep structure, operators taken from the continuous adjoint system.
Pair continuous_explicit(const Field& m, const Field& phi, const Field& g1, const Field& g2, const ModelParams& p) {
  const double dt = p.dt;
  const double b2 = 2.0 * p.beta;
  const VectorField drift = p.kernel->conv_grad(m);
  const VectorField G1 = grad(g1);
  const VectorField G2 = grad(g2);
  const Field f1 = dot(G1, drift);
  const Field f2 = dot(G2, drift);

  Field out1 = g1;
  out1.axpy(dt, -2.0 * b2 * (m * f1) + b2 * (phi - m * m) * p.kernel->conv_grad_dot(G1) +
                    b2 * ((1.0 - phi) * f2) + b2 * (m * (1.0 - phi)) * p.kernel->conv_grad_dot(G2));
  Field out2 = g2;
  out2.axpy(dt, -b2 * f1 - b2 * (m * f2) - p.alpha * g2);
  return {std::move(out1), std::move(out2)};
}

template <class Explicit>
AdjointTrajectory backward_sweep(const Trajectory& traj, const std::vector<Field>& s1, const std::vector<Field>& s2,
                                 const ModelParams& p, Explicit&& apply) {
  const int nt = traj.nt();
  AdjointTrajectory adj;
  adj.gamma1.assign(nt + 1, Field(p.grid));
  adj.gamma2.assign(nt + 1, Field(p.grid));
  for (int n = nt - 1; n >= 0; --n) {
    const int k = n + 1;
    Pair e = apply(traj.m[k], traj.phi[k], adj.gamma1[k], adj.gamma2[k], p);
    e.g1.axpy(p.dt, s1[k]);
    e.g2.axpy(p.dt, s2[k]);
    adj.gamma1[n] = p.spectral->solve_shifted(e.g1, p.dt);
    adj.gamma2[n] = p.spectral->solve_shifted(e.g2, p.dt);
    if (!adj.gamma1[n].all_finite() || !adj.gamma2[n].all_finite())
      throw NonFiniteError(n, "adjoint blew up");
  }
  return adj;
}

std::vector<Field> misfit_source(const Trajectory& traj, const Target& phi_d) {
  if (static_cast<int>(phi_d.size()) != traj.nt() + 1)
    throw Error(ErrorKind::ShapeMismatch, "target needs nt + 1 nodes");
  return subtract(traj.phi, phi_d);
}

}  // namespace

Target constant_target(const Field& phi_d, int nt) { return Target(static_cast<std::size_t>(nt) + 1, phi_d); }

double spacetime_inner(const std::vector<Field>& a, const std::vector<Field>& b, double dt, std::size_t first) {
  if (a.size() != b.size()) throw Error(ErrorKind::ShapeMismatch, "slice counts differ");
  double acc = 0.0;
  for (std::size_t n = first; n < a.size(); ++n) acc += dt * inner(a[n], b[n]);
  return acc;
}

CostBreakdown cost(const Trajectory& traj, const ControlField& theta, const Target& phi_d, double delta) {
  if (static_cast<int>(phi_d.size()) != traj.nt() + 1 || theta.nt() != traj.nt())
    throw Error(ErrorKind::ShapeMismatch, "target, trajectory and control lengths disagree");
  CostBreakdown c;
  // dt recovered from the stored time nodes
  const double dt = traj.nt() > 0 ? traj.times[1] - traj.times[0] : 0.0;
  for (int n = 1; n <= traj.nt(); ++n) {
    const Field e = traj.phi[n] - phi_d[n];
    c.misfit += 0.5 * dt * inner(e, e);
  }
  for (const Field& t : theta.slices) c.reg += 0.5 * delta * dt * inner(t, t);
  return c;
}

AdjointTrajectory solve_adjoint_transpose(const Trajectory& traj, const std::vector<Field>& s1,
                                          const std::vector<Field>& s2, const ModelParams& p) {
  if (static_cast<int>(s1.size()) != traj.nt() + 1 || static_cast<int>(s2.size()) != traj.nt() + 1)
    throw Error(ErrorKind::ShapeMismatch, "sources need nt + 1 nodes");
  return backward_sweep(traj, s1, s2, p, transpose_explicit);
}

AdjointTrajectory solve_adjoint_discrete(const Trajectory& traj, const Target& phi_d, const ModelParams& p) {
  const std::vector<Field> zero(traj.nt() + 1, Field(p.grid));
  return backward_sweep(traj, zero, misfit_source(traj, phi_d), p, transpose_explicit);
}

AdjointTrajectory solve_adjoint_continuous(const Trajectory& traj, const Target& phi_d, const ModelParams& p) {
  const std::vector<Field> zero(traj.nt() + 1, Field(p.grid));
  return backward_sweep(traj, zero, misfit_source(traj, phi_d), p, continuous_explicit);
}

Target manufacture_target(const Trajectory& traj, const std::vector<Field>& gamma2, const ModelParams& p) {
  const int nt = traj.nt();
  if (static_cast<int>(gamma2.size()) != nt) throw Error(ErrorKind::ShapeMismatch, "need one gamma2 slice per step");
  Target phi_d(static_cast<std::size_t>(nt) + 1, traj.phi[0]);
  Field g1(p.grid);
  Field g2(p.grid);  // gamma_nt = 0
  for (int n = nt - 1; n >= 0; --n) {
    const int k = n + 1;
    Pair e = transpose_explicit(traj.m[k], traj.phi[k], g1, g2, p);
    // (I - dt Lap) gamma2_n = e2 + dt s2_k, solved for the source s2_k = phi_k - phi_d,k
    Field s2 = gamma2[n] - p.dt * laplacian(gamma2[n]) - e.g2;
    s2 *= 1.0 / p.dt;
    phi_d[k] = traj.phi[k] - s2;
    g1 = p.spectral->solve_shifted(e.g1, p.dt);
    g2 = gamma2[n];
  }
  return phi_d;
}

std::vector<Field> reduced_gradient(const AdjointTrajectory& adj, const ControlField& theta, double delta) {
  if (adj.gamma2.size() != theta.slices.size() + 1)
    throw Error(ErrorKind::ShapeMismatch, "adjoint and control lengths disagree");
  std::vector<Field> g;
  g.reserve(theta.slices.size());
  for (std::size_t n = 0; n < theta.slices.size(); ++n) {
    Field s = adj.gamma2[n];
    s.axpy(delta, theta.slices[n]);
    g.push_back(std::move(s));
  }
  return g;
}

std::vector<Field> project_admissible(const std::vector<Field>& slices, double lo, double hi) {
  std::vector<Field> out = slices;
  for (Field& f : out)
    for (double& v : f.values()) v = std::clamp(v, lo, hi);
  return out;
}

ControlField project_admissible(const ControlField& theta) {
  return ControlField(project_admissible(theta.slices, theta.theta_min, theta.theta_max), theta.theta_min,
                      theta.theta_max);
}

double stationarity_residual(const ControlField& theta, const std::vector<Field>& g, double dt, double s_ref) {
  if (g.size() != theta.slices.size()) throw Error(ErrorKind::ShapeMismatch, "gradient and control lengths disagree");
  std::vector<Field> trial = theta.slices;
  for (std::size_t n = 0; n < trial.size(); ++n) trial[n].axpy(-s_ref, g[n]);
  trial = project_admissible(trial, theta.theta_min, theta.theta_max);
  return control_l2(subtract(theta.slices, trial), dt);
}

double projection_characterization_check(const ControlField& theta, const AdjointTrajectory& adj, double delta,
                                         double dt) {
  if (delta == 0.0) throw Error(ErrorKind::DeltaZero, "projection formula needs delta > 0");
  if (adj.gamma2.size() != theta.slices.size() + 1)
    throw Error(ErrorKind::ShapeMismatch, "adjoint and control lengths disagree");
  std::vector<Field> candidate;
  candidate.reserve(theta.slices.size());
  for (std::size_t n = 0; n < theta.slices.size(); ++n) candidate.push_back((-1.0 / delta) * adj.gamma2[n]);
  candidate = project_admissible(candidate, theta.theta_min, theta.theta_max);
  return control_l2(subtract(theta.slices, candidate), dt);
}

}  // namespace evapctl
