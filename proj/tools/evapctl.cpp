#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "evapctl/config.hpp"
#include "evapctl/errors.hpp"
#include "evapctl/io.hpp"
#include "evapctl/optimize.hpp"
#include "evapctl/sensitivity.hpp"
#include "evapctl/verify.hpp"

namespace fs = std::filesystem;
using namespace evapctl;

namespace {

struct Common {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "run configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", c.out_dir, "output directory (overrides io.out_dir)");
  cmd->add_option("--seed", c.seed, "random seed (overrides seed)");
}

RunConfig load(const Common& c) {
  RunConfig cfg = load_config(c.config);
  if (!c.out_dir.empty()) cfg.io.out_dir = c.out_dir;
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

fs::path prepare_out(const RunConfig& cfg) {
  fs::path dir = cfg.io.out_dir;
  fs::create_directories(dir);
  return dir;
}

void warn_stability(const ModelParams& p) {
  const double bound = p.stability_dt_bound();
  if (p.dt > bound)
    std::fprintf(stderr, "warning: dt = %g exceeds the conservative explicit bound %g\n", p.dt, bound);
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

int cmd_simulate(const Common& c) {
  const RunConfig cfg = load(c);
  const Problem prob = build_problem(cfg);
  warn_stability(prob.params);
  const Trajectory traj = solve_state(prob.init, prob.theta, prob.params);
  const fs::path dir = prepare_out(cfg);
  write_timeseries(dir / "series.csv", traj);
  write_trajectory_snapshots(dir, traj, cfg.io.snapshot_stride);
  const BoundsReport b = bounds_check(traj);
  std::printf("steps %d  mass_m %.17g -> %.17g  max violation %g\n", traj.nt(), integral(traj.m.front()),
              integral(traj.m.back()), std::max(b.max_viol_m, b.max_viol_order));
  return 0;
}

int cmd_optimize(const Common& c) {
  const RunConfig cfg = load(c);
  const Problem prob = build_problem(cfg);
  warn_stability(prob.params);
  const OptResult res = pgd_optimize(prob.init, prob.theta, prob.target, prob.delta, prob.params, prob.opt);
  const fs::path dir = prepare_out(cfg);

  std::ofstream hist(dir / "opt_history.csv");
  hist << "iter,cost,misfit,reg,stationarity,step\n";
  hist.precision(17);
  for (const OptIterate& it : res.history)
    hist << it.iter << ',' << it.cost.total() << ',' << it.cost.misfit << ',' << it.cost.reg << ','
         << it.stationarity << ',' << it.step << '\n';
  if (!hist) throw Error(ErrorKind::IoError, "cannot write opt_history.csv");

  for (int n = 0; n < res.theta.nt(); ++n)
    write_snapshot(dir / snapshot_name("theta", n), res.theta.slices[n], n * prob.params.dt);

  const OptIterate& first = res.history.front();
  const OptIterate& last = res.history.back();
  std::ostringstream summary;
  summary << "termination " << to_string(res.reason) << '\n'
          << "iterations " << res.iterations << '\n'
          << "cost_initial " << g(first.cost.total()) << '\n'
          << "cost_final " << g(last.cost.total()) << '\n'
          << "misfit_initial " << g(first.cost.misfit) << '\n'
          << "misfit_final " << g(last.cost.misfit) << '\n'
          << "stationarity_initial " << g(first.stationarity) << '\n'
          << "stationarity_final " << g(last.stationarity) << '\n';
  std::ofstream(dir / "result.txt") << summary.str();
  std::cout << summary.str();
  if (res.reason == Termination::line_search_failed) {
    std::cerr << "optimize: line search failed at iteration " << res.iterations << '\n';
    return 2;
  }
  return 0;
}

int cmd_gradcheck(const Common& c, int directions, double eps) {
  const RunConfig cfg = load(c);
  const Problem prob = build_problem(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::vector<Field>> dirs;
  for (int k = 0; k < directions; ++k) dirs.push_back(realize_control("noise:1,2", prob.params.grid, prob.params.nt, rng));
  const auto rows = gradient_check(prob.init, prob.theta, prob.target, prob.delta, prob.params, dirs, eps);
  std::printf("%4s %14s %24s %24s %12s\n", "dir", "eps", "finite_difference", "adjoint", "rel_error");
  int failures = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const GradCheckRow& r = rows[k];
    std::printf("%4zu %14.3e %24.16e %24.16e %12.3e\n", k, r.eps, r.fd, r.adjoint, r.rel_error);
    if (!(r.rel_error <= 1e-6)) {
      std::fprintf(stderr, "gradcheck: direction %zu relative error %.3e > 1e-6\n", k, r.rel_error);
      ++failures;
    }
  }
  return failures ? 1 : 0;
}

int cmd_taylor(const Common& c, const std::string& direction, const std::vector<double>& eps) {
  const RunConfig cfg = load(c);
  const Problem prob = build_problem(cfg);
  std::mt19937_64 rng(cfg.seed);
  const std::vector<Field> h =
      realize_control(direction, prob.params.grid, prob.params.nt, rng, cfg.base_dir, "--direction");
  const TaylorReport tr = taylor_test(prob.init, prob.theta, h, prob.params, eps);
  std::printf("||DS h|| = %.6e\n%14s %14s %14s %8s\n", tr.tangent_norm, "eps", "remainder", "first_order", "order");
  int failures = 0;
  for (std::size_t i = 0; i < tr.eps.size(); ++i) {
    std::printf("%14.4e %14.6e %14.6e", tr.eps[i], tr.remainder[i], tr.first_order[i]);
    if (i < tr.orders.size()) {
      std::printf(" %8.4f", tr.orders[i]);
      if (!(tr.orders[i] >= 1.9 && tr.orders[i] <= 2.1)) {
        std::fprintf(stderr, "taylor: order %.4f between rungs %zu and %zu outside [1.9, 2.1]\n", tr.orders[i], i,
                     i + 1);
        ++failures;
      }
    }
    std::printf("\n");
  }
  return failures ? 1 : 0;
}

int cmd_verify(const Common& c) {
  const RunConfig cfg = load(c);
  const auto t0 = std::chrono::steady_clock::now();
  const VerifyReport rep = run_verify(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const fs::path dir = prepare_out(cfg);
  write_verify_report(dir / "verify_report.csv", rep);
  for (const VerifyRow& r : rep.rows) {
    std::printf("%-4s %-28s measured %-13.4e threshold %-10.3g %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.measured, r.threshold, r.detail.c_str());
    if (!r.pass) std::fprintf(stderr, "verify: %s failed: %s\n", r.name.c_str(), r.detail.c_str());
  }
  std::printf("%zu checks, %.1f s\n", rep.rows.size(), secs);
  return rep.all_pass() ? 0 : 1;
}

int cmd_kernel_info(const Common& c) {
  const RunConfig cfg = load(c);
  const ModelParams p = build_params(cfg);
  std::cout << format_report(kernel_report(*p.kernel));
  std::printf("stability_dt_bound=%.6e\ndt=%.6e\n", p.stability_dt_bound(), p.dt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal control of a nonlocal phase-separation model with bulk evaporation"};
  app.require_subcommand(1);
  Common common;

  auto* simulate = app.add_subcommand("simulate", "run the forward model, write series.csv and snapshots");
  auto* optimize = app.add_subcommand("optimize", "projected-gradient optimization of the control");
  auto* gradcheck = app.add_subcommand("gradcheck", "adjoint gradient vs central finite differences");
  auto* taylor = app.add_subcommand("taylor", "Taylor remainder ladder of the control-to-state map");
  auto* verify = app.add_subcommand("verify", "run the property suite and write verify_report.csv");
  auto* kinfo = app.add_subcommand("kernel-info", "print kernel diagnostics");
  for (auto* cmd : {simulate, optimize, gradcheck, taylor, verify, kinfo}) add_common(cmd, common);

  int directions = 5;
  double fd_eps = 1e-3;
  gradcheck->add_option("--directions", directions, "number of random directions")->check(CLI::PositiveNumber);
  gradcheck->add_option("--eps", fd_eps, "finite-difference step")->check(CLI::PositiveNumber);
  std::string direction = "noise:1,2";
  std::vector<double> ladder = {0.2, 0.1, 0.05, 0.025};
  taylor->add_option("--direction", direction, "control direction as a field spec");
  taylor->add_option("--eps", ladder, "epsilon ladder");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(common);
    if (*optimize) return cmd_optimize(common);
    if (*gradcheck) return cmd_gradcheck(common, directions, fd_eps);
    if (*taylor) return cmd_taylor(common, direction, ladder);
    if (*verify) return cmd_verify(common);
    if (*kinfo) return cmd_kernel_info(common);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.key() << ": " << e.reason() << '\n';
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: line " << e.line() << ": " << e.what() << '\n';
    return 1;
  } catch (const NonFiniteError& e) {
    std::cerr << "error: non-finite state at step " << e.step() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
