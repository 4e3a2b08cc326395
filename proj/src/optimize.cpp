#include "evapctl/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace evapctl {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::line_search_failed: return "line_search_failed";
  }
  return "unknown";
}

Evaluation evaluate(const InitData& init, const ControlField& theta, const Target& phi_d, double delta,
                    const ModelParams& p) {
  Trajectory traj = solve_state(init, theta, p);
  CostBreakdown c = cost(traj, theta, phi_d, delta);
  AdjointTrajectory adj = solve_adjoint_discrete(traj, phi_d, p);
  std::vector<Field> g = reduced_gradient(adj, theta, delta);
  return {std::move(traj), c, std::move(adj), std::move(g)};
}

OptResult pgd_optimize(const InitData& init, const ControlField& theta0, const Target& phi_d, double delta,
                       const ModelParams& p, const OptConfig& cfg) {
  OptResult out;
  out.theta = project_admissible(theta0);
  Evaluation ev = evaluate(init, out.theta, phi_d, delta, p);
  double res = stationarity_residual(out.theta, ev.gradient, p.dt);
  out.history.push_back({0, ev.cost, res, 0.0});

  out.reason = Termination::max_iters;
  double s0 = cfg.step0;
  for (int k = 0; k < cfg.max_iters; ++k) {
    if (res <= cfg.tol) {
      out.reason = Termination::converged;
      break;
    }
    bool accepted = false;
    for (double s = s0; s >= cfg.s_min; s *= cfg.shrink) {
      ControlField trial = out.theta;
      for (std::size_t n = 0; n < trial.slices.size(); ++n) trial.slices[n].axpy(-s, ev.gradient[n]);
      trial = project_admissible(trial);
      const double move = control_l2(subtract(trial.slices, out.theta.slices), p.dt);
      const Trajectory t = solve_state(init, trial, p);
      const CostBreakdown c = cost(t, trial, phi_d, delta);
      if (c.total() <= ev.cost.total() - cfg.c1 / s * move * move) {
        const std::vector<Field> g_old = std::move(ev.gradient);
        const std::vector<Field> ds = subtract(trial.slices, out.theta.slices);
        out.theta = std::move(trial);
        ev = evaluate(init, out.theta, phi_d, delta, p);
        if (cfg.bb_step) {
          // short BB step <ds, dg> / <dg, dg>; the long variant overshoots too often here
          const std::vector<Field> dg = subtract(ev.gradient, g_old);
          const double curv = spacetime_inner(ds, dg, p.dt);
          const double gg = spacetime_inner(dg, dg, p.dt);
          s0 = curv > 0.0 && gg > 0.0 ? std::clamp(curv / gg, cfg.s_min, 1e12) : cfg.step0;
        }
        res = stationarity_residual(out.theta, ev.gradient, p.dt);
        ++out.iterations;
        out.history.push_back({out.iterations, ev.cost, res, s});
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.reason = Termination::line_search_failed;
      break;
    }
  }
  if (out.reason == Termination::max_iters && res <= cfg.tol) out.reason = Termination::converged;
  return out;
}

std::vector<GradCheckRow> gradient_check(const InitData& init, const ControlField& theta, const Target& phi_d,
                                         double delta, const ModelParams& p,
                                         const std::vector<std::vector<Field>>& directions, double eps) {
  const Evaluation ev = evaluate(init, theta, phi_d, delta, p);
  std::vector<GradCheckRow> rows;
  for (const auto& h : directions) {
    ControlField plus = theta;
    ControlField minus = theta;
    for (std::size_t n = 0; n < h.size(); ++n) {
      plus.slices[n].axpy(eps, h[n]);
      minus.slices[n].axpy(-eps, h[n]);
    }
    const double jp = cost(solve_state(init, plus, p), plus, phi_d, delta).total();
    const double jm = cost(solve_state(init, minus, p), minus, phi_d, delta).total();
    GradCheckRow r;
    r.eps = eps;
    r.fd = (jp - jm) / (2.0 * eps);
    r.adjoint = spacetime_inner(ev.gradient, h, p.dt);
    r.rel_error = std::abs(r.fd - r.adjoint) / std::max(std::abs(r.fd), 1e-300);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace evapctl
