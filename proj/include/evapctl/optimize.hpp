#pragma once

#include <string>
#include <vector>

#include "evapctl/adjoint.hpp"

namespace evapctl {

struct OptConfig {
  int max_iters = 100;
  double step0 = 1.0;
  double shrink = 0.5;
  double c1 = 1e-4;
  double s_min = 1e-12;
  double tol = 1e-8;  ///< absolute threshold on stationarity_residual (s_ref = 1)
  /// Start each line search from the Barzilai-Borwein step <ds, dg> / <dg, dg> of the last
  /// accepted move instead of step0. Acceptance stays monotone Armijo.
  bool bb_step = false;

  bool operator==(const OptConfig&) const = default;
};

enum class Termination { converged, max_iters, line_search_failed };

std::string_view to_string(Termination t);

struct OptIterate {
  int iter = 0;
  CostBreakdown cost;
  double stationarity = 0.0;
  double step = 0.0;  ///< accepted step that produced this iterate (0 for the start)
};

struct OptResult {
  ControlField theta;
  std::vector<OptIterate> history;
  int iterations = 0;
  Termination reason = Termination::max_iters;
};

/// Cost, adjoint and gradient of the reduced functional at one control.
struct Evaluation {
  Trajectory traj;
  CostBreakdown cost;
  AdjointTrajectory adj;
  std::vector<Field> gradient;
};

Evaluation evaluate(const InitData& init, const ControlField& theta, const Target& phi_d, double delta,
                    const ModelParams& p);

/// Projected gradient descent with Armijo backtracking. A trial step s is accepted when
///   J(P(theta - s g)) <= J(theta) - (c1 / s) ||P(theta - s g) - theta||^2.
/// The starting control is projected first.
OptResult pgd_optimize(const InitData& init, const ControlField& theta0, const Target& phi_d, double delta,
                       const ModelParams& p, const OptConfig& cfg);

struct GradCheckRow {
  double eps = 0.0;
  double fd = 0.0;       ///< (J(theta + eps h) - J(theta - eps h)) / (2 eps)
  double adjoint = 0.0;  ///< sum_n <g_n, h_n> dt
  double rel_error = 0.0;
};

/// Central-difference check of the adjoint gradient, one row per direction.
std::vector<GradCheckRow> gradient_check(const InitData& init, const ControlField& theta, const Target& phi_d,
                                         double delta, const ModelParams& p,
                                         const std::vector<std::vector<Field>>& directions, double eps);

}  // namespace evapctl
