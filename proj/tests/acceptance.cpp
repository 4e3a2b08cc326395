// Acceptance run: one PASS/FAIL line per criterion. Each criterion is a list of clauses;
// clauses marked `known_red` are tracked open results (see the project notes) and print
// FAIL without failing the process. Any other failing clause is a regression.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dense_oracle.hpp"
#include "evapctl/config.hpp"
#include "evapctl/verify.hpp"

using namespace evapctl;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = std::numbers::pi;

struct Clause {
  std::string what;
  bool pass = false;
  bool known_red = false;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::vector<Clause> clauses;

  void check(std::string what, bool ok, bool known_red = false) { clauses.push_back({std::move(what), ok, known_red}); }
  bool pass() const {
    for (const Clause& c : clauses)
      if (!c.pass) return false;
    return !clauses.empty();
  }
  bool regression() const {
    for (const Clause& c : clauses)
      if (!c.pass && !c.known_red) return true;
    return clauses.empty();
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RunConfig grid_config(int n, double T, double dt, const std::string& extra = "") {
  return parse_config("grid.nx = " + std::to_string(n) + "\ngrid.ny = " + std::to_string(n) + "\ntime.T = " +
                      fmt("%.17g", T) + "\ntime.dt = " + fmt("%.17g", dt) +
                      "\nmodel.beta = 1\nmodel.alpha = 1\ninit.m0 = noise:0.2,2\ninit.phi0 = constant:0.5\n" + extra);
}

std::vector<Field> random_slices(const Grid& g, int nt, std::mt19937_64& rng) {
  std::vector<Field> out;
  for (int n = 0; n < nt; ++n) out.push_back(realize_field("noise:1,2", g, rng));
  return out;
}

const std::filesystem::path kDefaultConfig = std::filesystem::path(EVAPCTL_SOURCE_DIR) / "configs" / "default.cfg";

Criterion conservation() {
  Criterion c{1, "conservation"};
  const Problem pr = build_problem(load_config(kDefaultConfig));
  const ModelParams& p = pr.params;
  const auto t0 = Clock::now();
  const Trajectory t = solve_state(pr.init, ControlField::constant(p.grid, p.nt, 0.0, 0.0, 1.0), p);
  const double secs = seconds_since(t0);
  const Trajectory tc = solve_state(pr.init, pr.theta, p);
  double mass_scale = 0.0;
  for (double v : pr.init.m0.values()) mass_scale += std::abs(v);
  double drift = 0.0;
  double balance = 0.0;
  for (const Trajectory* tr : {&t, &tc}) {
    for (int n = 0; n <= p.nt; ++n) {
      drift = std::max(drift, std::abs(sum(tr->m[n]) - sum(pr.init.m0)) / mass_scale);
      if (n == p.nt) continue;
      const double lhs = integral(tr->phi[n + 1]);
      const double rhs = integral(tr->phi[n]) + p.dt * integral(p.alpha * (1.0 - tr->phi[n]) + tr->theta.slices[n]);
      balance = std::max(balance, std::abs(lhs - rhs) / std::abs(lhs));
    }
  }
  c.check("nt = 500", p.nt == 500);
  c.check("mass drift " + fmt("%.2e", drift), drift <= 1e-12);
  c.check("phi balance " + fmt("%.2e", balance), balance <= 1e-12);
  c.check("runtime " + fmt("%.2f s", secs) + " at 64^2", secs < 10.0 && p.grid.nx() == 64);
  return c;
}

Criterion analytic_limits() {
  Criterion c{2, "analytic limits"};
  {
    const Grid g(16, 16, 1.0, 1.0);
    const double dt = 1e-3;
    const ModelParams p = ModelParams::make(g, 1.0, 1.0, 1.0, dt, std::make_shared<const Kernel>(build_kernel(g, 0.2)));
    const Trajectory t = solve_state(InitData::make(Field(g, 0.3), Field(g, 0.4)),
                                     ControlField::constant(g, p.nt, 0.0, 0.0, 1.0), p);
    const double err = max_abs(t.phi.back() - Field(g, 1.0 - 0.6 * std::exp(-1.0)));
    c.check("constant solution error " + fmt("%.2e", err) + " vs 2 dt", err <= 2 * dt);
  }
  {
    const Grid g(64, 64, 1.0, 1.0);
    const ModelParams p = ModelParams::make(g, 0.0, 0.0, 0.1, 1e-3, std::make_shared<const Kernel>(build_kernel(g, 0.1)));
    const Field m0 = Field::from_function(g, [](double x, double y) { return 0.3 * std::cos(2 * kPi * x) * std::cos(4 * kPi * y); });
    const Trajectory t = solve_state(InitData::make(m0, Field(g, 0.5)), ControlField::constant(g, p.nt, 0.0, 0.0, 1.0), p);
    const double lam = (2 / (g.hx() * g.hx())) * (1 - std::cos(2 * kPi * g.hx())) +
                       (2 / (g.hy() * g.hy())) * (1 - std::cos(4 * kPi * g.hy()));
    double err = 0.0;
    for (int n = 0; n <= p.nt; ++n) err = std::max(err, max_abs(t.m[n] - std::pow(1 + p.dt * lam, -n) * m0));
    c.check("beta = 0 mode error " + fmt("%.2e", err), err <= 1e-12);
  }
  return c;
}

Criterion bounds() {
  Criterion c{3, "phase-separation bounds"};
  const Problem pr = build_problem(load_config(kDefaultConfig));
  const ModelParams& p = pr.params;
  const BoundsReport b = bounds_check(solve_state(pr.init, ControlField::constant(p.grid, p.nt, 0.0, 0.0, 1.0), p));
  const double v = std::max(b.max_viol_m, b.max_viol_order);
  c.check("64^2 dt = 1e-3", p.grid.nx() == 64 && p.dt == 1e-3);
  c.check("max violation " + fmt("%.2e", v), v <= 1e-8);
  return c;
}

Criterion lipschitz() {
  Criterion c{4, "Lipschitz probe"};
  const Problem pr = build_problem(grid_config(32, 0.5, 5e-3));
  const ModelParams& p = pr.params;
  std::mt19937_64 rng(401);
  double lo = 1e300;
  double hi = 0.0;
  bool finite = true;
  for (int k = 0; k < 20; ++k) {
    auto draw = [&] {
      std::vector<Field> s = random_slices(p.grid, p.nt, rng);
      for (Field& f : s) f = 0.5 + f;
      return ControlField(project_admissible(s, 0.0, 1.0), 0.0, 1.0);
    };
    const double r = lipschitz_probe(pr.init, draw(), draw(), p);
    finite = finite && std::isfinite(r);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  c.check("20 ratios finite", finite);
  c.check("spread " + fmt("%.2f", hi / lo), hi / lo < 50.0);

  // beta = alpha = 0: phi difference solves (I - dt L) d+ = d + dt (theta1 - theta2)
  const Grid g(8, 8, 1.0, 1.0);
  const ModelParams lp = ModelParams::make(g, 0.0, 0.0, 0.1, 0.01, std::make_shared<const Kernel>(build_kernel(g, 0.4)));
  const ControlField a(random_slices(g, lp.nt, rng), -10, 10);
  const ControlField b(random_slices(g, lp.nt, rng), -10, 10);
  const double ratio = lipschitz_probe(InitData::make(Field(g), Field(g, 0.5)), a, b, lp);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(64, 64) -
                                                lp.dt * test::laplacian_matrix(g));
  Eigen::VectorXd d = Eigen::VectorXd::Zero(64);
  double state2 = 0.0;
  double ctrl2 = 0.0;
  for (int n = 0; n < lp.nt; ++n) {
    const Eigen::VectorXd src = test::to_vec(a.slices[n]) - test::to_vec(b.slices[n]);
    ctrl2 += lp.dt * g.cell_area() * src.squaredNorm();
    d = lu.solve(d + lp.dt * src);
    const Field df = test::to_field(g, d);
    double gx2 = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const double gx = (df.at(i + 1, j) - df.at(i - 1, j)) / (2 * g.hx());
        const double gy = (df.at(i, j + 1) - df.at(i, j - 1)) / (2 * g.hy());
        gx2 += (gx * gx + gy * gy) * g.cell_area();
      }
    const double h1 = std::sqrt(g.cell_area() * d.squaredNorm()) + std::sqrt(gx2);
    state2 += lp.dt * h1 * h1;
  }
  const double oracle = std::sqrt(state2 / ctrl2);
  const double rel = std::abs(ratio - oracle) / oracle;
  c.check("beta = 0 oracle rel " + fmt("%.2e", rel), rel <= 1e-10);
  return c;
}

Criterion taylor() {
  Criterion c{5, "Taylor remainder"};
  const auto t0 = Clock::now();
  const Problem pr = build_problem(grid_config(32, 0.5, 5e-3, "control.theta = constant:0.3\n"));
  std::mt19937_64 rng(501);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const TaylorReport r = taylor_test(pr.init, pr.theta, random_slices(pr.params.grid, pr.params.nt, rng), pr.params,
                                       {0.2, 0.1, 0.05, 0.025});
    for (double o : r.orders) worst = std::max(worst, std::abs(o - 2.0));
  }
  const double secs = seconds_since(t0);
  c.check("nt = 100", pr.params.nt == 100);
  c.check("max |order - 2| " + fmt("%.2e", worst), worst <= 0.1);
  c.check("runtime " + fmt("%.2f s", secs), secs < 60.0);
  return c;
}

Criterion adjoint_exactness() {
  Criterion c{6, "adjoint exactness"};
  const Problem pr = build_problem(grid_config(32, 0.5, 5e-3,
                                               "control.theta = constant:0.3\ntarget.phi_d = twin:cosine:0.5,1,1,0.5\n"));
  const ModelParams& p = pr.params;
  std::mt19937_64 rng(601);
  const Trajectory t = solve_state(pr.init, pr.theta, p);
  const std::vector<Field> h = random_slices(p.grid, p.nt, rng);
  const std::vector<Field> s1 = random_slices(p.grid, p.nt + 1, rng);
  const std::vector<Field> s2 = random_slices(p.grid, p.nt + 1, rng);
  const TangentTrajectory tan = solve_linearized(t, h, p);
  const AdjointTrajectory adj = solve_adjoint_transpose(t, s1, s2, p);
  const double lhs = spacetime_inner(tan.phi1, s1, p.dt, 1) + spacetime_inner(tan.phi2, s2, p.dt, 1);
  const double rhs = spacetime_inner(h, {adj.gamma2.begin(), adj.gamma2.end() - 1}, p.dt);
  const double dual = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
  c.check("duality rel " + fmt("%.2e", dual), dual <= 1e-10);

  std::vector<std::vector<Field>> dirs;
  for (int k = 0; k < 5; ++k) dirs.push_back(random_slices(p.grid, p.nt, rng));
  double worst = 0.0;
  for (const GradCheckRow& r : gradient_check(pr.init, pr.theta, pr.target, 1e-3, p, dirs, 1e-3))
    worst = std::max(worst, r.rel_error);
  c.check("gradcheck 5 directions max rel " + fmt("%.2e", worst), worst <= 1e-6);
  return c;
}

Criterion optimization() {
  Criterion c{7, "optimization"};
  RunConfig cfg = grid_config(32, 0.5, 5e-3,
                              "control.delta = 1e-6\ncontrol.theta = constant:0\n"
                              "target.phi_d = twin:cosine:0.5,1,1,0.5\n"
                              "opt.max_iters = 100\nopt.tol = 0\nopt.step_rule = bb\n");
  Problem pr = build_problem(cfg);
  const OptResult r = pgd_optimize(pr.init, pr.theta, pr.target, pr.delta, pr.params, pr.opt);
  const OptIterate& first = r.history.front();
  const OptIterate& last = r.history.back();
  bool monotone = true;
  for (std::size_t k = 1; k < r.history.size(); ++k)
    monotone = monotone && r.history[k].cost.total() <= r.history[k - 1].cost.total();
  const double red = 1.0 - last.cost.misfit / first.cost.misfit;
  const double stat = last.stationarity / first.stationarity;
  c.check("misfit reduction " + fmt("%.4f", red) + " in " + std::to_string(r.iterations) + " its",
          red >= 0.9 && r.iterations <= 100);
  c.check("cost nonincreasing", monotone);
  c.check("stationarity ratio " + fmt("%.2e", stat), stat <= 1e-6, true);

  cfg.control.delta = 1e-3;
  pr = build_problem(cfg);
  const OptResult r3 = pgd_optimize(pr.init, pr.theta, pr.target, pr.delta, pr.params, pr.opt);
  const Evaluation e = evaluate(pr.init, r3.theta, pr.target, pr.delta, pr.params);
  const double gap = projection_characterization_check(r3.theta, e.adj, pr.delta, pr.params.dt);
  const double res = stationarity_residual(r3.theta, e.gradient, pr.params.dt);
  const double bound = std::max(1.0, 1.0 / pr.delta) * res;
  c.check("delta = 1e-3 gap " + fmt("%.2e", gap) + " <= bound " + fmt("%.2e", bound), gap <= bound * (1 + 1e-9));
  return c;
}

Criterion adjoint_crosscheck() {
  Criterion c{8, "continuous vs discrete adjoint"};
  auto rel_gap = [](double beta, int n) {
    RunConfig cfg = parse_config("grid.nx = " + std::to_string(n) + "\ngrid.ny = " + std::to_string(n) +
                                 "\ntime.T = 0.1\ntime.dt = 1e-3\nmodel.beta = 1\nmodel.alpha = 1\n"
                                 "init.m0 = cosine:0.3,1,2\ninit.phi0 = constant:0.5\n"
                                 "target.phi_d = cosine:0.2,2,1,0.7\ncontrol.theta = constant:0.2\n");
    Problem pr = build_problem(cfg);
    pr.params.beta = beta;
    const Trajectory t = solve_state(pr.init, pr.theta, pr.params);
    const AdjointTrajectory a = solve_adjoint_discrete(t, pr.target, pr.params);
    const AdjointTrajectory b = solve_adjoint_continuous(t, pr.target, pr.params);
    const std::vector<Field> d = subtract(a.gamma2, b.gamma2);
    double mx = 0.0;
    for (const Field& f : d) mx = std::max(mx, max_abs(f));
    const double rel = state_l2(d, pr.params.dt) / state_l2(a.gamma2, pr.params.dt);
    return std::pair{rel, mx};
  };
  const double beta0 = rel_gap(0.0, 32).second;
  c.check("beta = 0 max gap " + fmt("%.1e", beta0), beta0 <= 1e-12);
  std::vector<double> gaps;
  std::string list;
  for (int n : {32, 64, 128}) {
    gaps.push_back(rel_gap(1.0, n).first);
    list += (list.empty() ? "" : " ") + fmt("%.2e", gaps.back());
  }
  c.check("beta = 1 rel L2 gap 32/64/128: " + list + " decreasing",
          gaps[1] < gaps[0] && gaps[2] < gaps[1], true);
  return c;
}

Criterion verify_suite() {
  Criterion c{9, "verify suite"};
  const auto t0 = Clock::now();
  const VerifyReport rep = run_verify(load_config(kDefaultConfig));
  const double secs = seconds_since(t0);
  std::string failed;
  for (const VerifyRow& r : rep.rows)
    if (!r.pass) failed += " " + r.name;
  c.check("default config all rows pass" + (failed.empty() ? std::string() : " (failed:" + failed + ")"),
          rep.all_pass());
  c.check("runtime " + fmt("%.1f s", secs), secs < 120.0);
  const std::string cmd = std::string("\"") + EVAPCTL_MUTATION_BIN +
                          "\" --gtest_filter=Mutation.GradientCheck* > /dev/null 2>&1";
  c.check("flipped adjoint sign fails gradcheck", std::system(cmd.c_str()) == 0);
  return c;
}

}  // namespace

int main() {
  const std::vector<std::function<Criterion()>> runs = {conservation, analytic_limits, bounds,
                                                        lipschitz,    taylor,          adjoint_exactness,
                                                        optimization, adjoint_crosscheck, verify_suite};
  bool regression = false;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    Criterion c{static_cast<int>(k) + 1, "(aborted)"};
    try {
      c = runs[k]();
    } catch (const std::exception& e) {
      c.check(std::string("threw: ") + e.what(), false);
    }
    std::string detail;
    bool known = false;
    for (const Clause& cl : c.clauses) {
      detail += (detail.empty() ? "" : "; ") + cl.what + (cl.pass ? "" : " [FAIL]");
      known = known || (!cl.pass && cl.known_red);
    }
    const bool reg = c.regression();
    std::printf("criterion %d %-32s %s  %s%s\n", c.id, c.title.c_str(), c.pass() ? "PASS" : "FAIL", detail.c_str(),
                (!c.pass() && !reg && known) ? "  (known open result)" : "");
    std::fflush(stdout);
    regression = regression || reg;
  }
  return regression ? 1 : 0;
}
