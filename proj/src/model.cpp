#include "evapctl/model.hpp"

#include <algorithm>
#include <cmath>

#include "evapctl/errors.hpp"

namespace evapctl {

ModelParams ModelParams::make(const Grid& grid, double beta, double alpha, double T, double dt,
                              std::shared_ptr<const Kernel> kernel) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("model.beta", "must be finite and >= 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("model.alpha", "must be finite and >= 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("time.T", "must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time.dt", "must be positive");
  const long steps = std::lround(T / dt);
  if (steps < 1 || std::abs(steps * dt - T) > 1e-12 * T)
    throw ValidationError("time.dt", "T / dt must be an integer step count");
  if (!kernel) throw ValidationError("kernel.radius", "kernel missing");
  require_same_grid(kernel->grid(), grid);

  ModelParams p{grid, beta, alpha, T, dt, static_cast<int>(steps), std::move(kernel),
                Spectral::for_grid(grid)};
  return p;
}

double ModelParams::stability_dt_bound() const {
  const double h = std::min(grid.hx(), grid.hy());
  const double v = 2.0 * beta * kernel->grad_l1();
  const double denom = 4.0 * v * h + 2.0 * alpha * h * h;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return h * h / denom;
}

ControlField::ControlField(std::vector<Field> s, double lo, double hi)
    : slices(std::move(s)), theta_min(lo), theta_max(hi) {
  if (!(lo <= hi)) throw ValidationError("control.theta_min", "(A4) requires theta_min <= theta_max");
}

ControlField ControlField::constant(const Grid& grid, int nt, double value, double lo, double hi) {
  return ControlField(std::vector<Field>(static_cast<std::size_t>(nt), Field(grid, value)), lo, hi);
}

double control_l2(const std::vector<Field>& slices, double dt) {
  double acc = 0.0;
  for (const Field& f : slices) acc += dt * inner(f, f);
  return std::sqrt(acc);
}

std::vector<Field> subtract(const std::vector<Field>& a, const std::vector<Field>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::ShapeMismatch, "slice counts differ");
  std::vector<Field> out;
  out.reserve(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) out.push_back(a[n] - b[n]);
  return out;
}

double state_l2(const std::vector<Field>& series, double dt) {
  double acc = 0.0;
  for (std::size_t n = 1; n < series.size(); ++n) acc += dt * inner(series[n], series[n]);
  return std::sqrt(acc);
}

double state_l2_h1(const std::vector<Field>& series, double dt) {
  double acc = 0.0;
  for (std::size_t n = 1; n < series.size(); ++n) {
    const double h1 = h1_norm(series[n]);
    acc += dt * h1 * h1;
  }
  return std::sqrt(acc);
}

}  // namespace evapctl
