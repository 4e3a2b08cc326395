#include "evapctl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "evapctl/errors.hpp"
#include "evapctl/io.hpp"

namespace evapctl {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw ValidationError(key, "not a number: '" + text + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  long long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ValidationError(key, "not an integer: '" + text + "'");
  return v;
}

std::vector<double> parse_args(const std::string& key, const std::string& args) {
  std::vector<double> out;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Field box_smooth(const Field& f) {
  Field out(f.grid());
  for (int j = 0; j < f.grid().ny(); ++j)
    for (int i = 0; i < f.grid().nx(); ++i) {
      double acc = 0.0;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) acc += f.at(i + di, j + dj);
      out.at(i, j) = acc / 9.0;
    }
  return out;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

// Assigns one key; returns false for unknown keys.
bool assign(RunConfig& c, const std::string& key, const std::string& value) {
  using Setter = std::function<void(RunConfig&, const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"grid.nx", [](RunConfig& r, const std::string& v) { r.grid.nx = static_cast<int>(parse_int("grid.nx", v)); }},
      {"grid.ny", [](RunConfig& r, const std::string& v) { r.grid.ny = static_cast<int>(parse_int("grid.ny", v)); }},
      {"grid.Lx", [](RunConfig& r, const std::string& v) { r.grid.lx = parse_double("grid.Lx", v); }},
      {"grid.Ly", [](RunConfig& r, const std::string& v) { r.grid.ly = parse_double("grid.Ly", v); }},
      {"time.T", [](RunConfig& r, const std::string& v) { r.time.T = parse_double("time.T", v); }},
      {"time.dt", [](RunConfig& r, const std::string& v) { r.time.dt = parse_double("time.dt", v); }},
      {"model.beta", [](RunConfig& r, const std::string& v) { r.model.beta = parse_double("model.beta", v); }},
      {"model.alpha", [](RunConfig& r, const std::string& v) { r.model.alpha = parse_double("model.alpha", v); }},
      {"kernel.radius", [](RunConfig& r, const std::string& v) { r.kernel.radius = parse_double("kernel.radius", v); }},
      {"control.theta_min",
       [](RunConfig& r, const std::string& v) { r.control.theta_min = parse_double("control.theta_min", v); }},
      {"control.theta_max",
       [](RunConfig& r, const std::string& v) { r.control.theta_max = parse_double("control.theta_max", v); }},
      {"control.delta", [](RunConfig& r, const std::string& v) { r.control.delta = parse_double("control.delta", v); }},
      {"control.theta", [](RunConfig& r, const std::string& v) { r.control.theta = v; }},
      {"init.m0", [](RunConfig& r, const std::string& v) { r.init.m0 = v; }},
      {"init.phi0", [](RunConfig& r, const std::string& v) { r.init.phi0 = v; }},
      {"target.phi_d", [](RunConfig& r, const std::string& v) { r.target.phi_d = v; }},
      {"opt.max_iters",
       [](RunConfig& r, const std::string& v) { r.opt.max_iters = static_cast<int>(parse_int("opt.max_iters", v)); }},
      {"opt.step0", [](RunConfig& r, const std::string& v) { r.opt.step0 = parse_double("opt.step0", v); }},
      {"opt.shrink", [](RunConfig& r, const std::string& v) { r.opt.shrink = parse_double("opt.shrink", v); }},
      {"opt.c1", [](RunConfig& r, const std::string& v) { r.opt.c1 = parse_double("opt.c1", v); }},
      {"opt.s_min", [](RunConfig& r, const std::string& v) { r.opt.s_min = parse_double("opt.s_min", v); }},
      {"opt.tol", [](RunConfig& r, const std::string& v) { r.opt.tol = parse_double("opt.tol", v); }},
      {"opt.step_rule",
       [](RunConfig& r, const std::string& v) {
         if (v != "fixed" && v != "bb") throw ValidationError("opt.step_rule", "expected 'fixed' or 'bb'");
         r.opt.bb_step = v == "bb";
       }},
      {"io.snapshot_stride",
       [](RunConfig& r, const std::string& v) {
         r.io.snapshot_stride = static_cast<int>(parse_int("io.snapshot_stride", v));
       }},
      {"io.out_dir", [](RunConfig& r, const std::string& v) { r.io.out_dir = v; }},
      {"seed", [](RunConfig& r, const std::string& v) { r.seed = static_cast<std::uint64_t>(parse_int("seed", v)); }},
  };
  auto it = setters.find(key);
  if (it == setters.end()) return false;
  it->second(c, value);
  return true;
}

void validate(const RunConfig& c) {
  if (c.model.beta <= 0.0) throw ValidationError("model.beta", "(A1) requires beta > 0");
  if (c.control.theta_min > c.control.theta_max)
    throw ValidationError("control.theta_min", "(A4) requires theta_min <= theta_max");
  if (c.control.delta < 0.0) throw ValidationError("control.delta", "must be >= 0");
  if (c.opt.max_iters < 0) throw ValidationError("opt.max_iters", "must be >= 0");
  if (!(c.opt.step0 > 0.0)) throw ValidationError("opt.step0", "must be > 0");
  if (!(c.opt.shrink > 0.0 && c.opt.shrink < 1.0)) throw ValidationError("opt.shrink", "must lie in (0, 1)");
  if (!(c.opt.c1 > 0.0)) throw ValidationError("opt.c1", "must be > 0");
  if (!(c.opt.s_min > 0.0)) throw ValidationError("opt.s_min", "must be > 0");
  if (c.opt.tol < 0.0) throw ValidationError("opt.tol", "must be >= 0");
  if (c.io.snapshot_stride < 0) throw ValidationError("io.snapshot_stride", "must be >= 0");
  const ModelParams p = build_params(c);  // grid, time, kernel
  (void)build_init(c, p.grid);            // (A2)
}

}  // namespace

double RunConfig::kernel_radius() const {
  return kernel.radius > 0.0 ? kernel.radius : 0.1 * std::min(grid.lx, grid.ly);
}

bool RunConfig::operator==(const RunConfig& o) const {
  return grid == o.grid && time == o.time && model == o.model && kernel == o.kernel && control == o.control &&
         init == o.init && target == o.target && opt == o.opt && io == o.io && seed == o.seed;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  static const char* required[] = {"grid.nx", "grid.ny", "time.T", "time.dt", "model.beta", "model.alpha",
                                   "init.m0", "init.phi0"};
  std::map<std::string, int> seen;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(line, "empty key");
    if (value.empty()) throw ParseError(line, "empty value for " + key);
    if (seen.count(key)) throw ParseError(line, "duplicate key " + key);
    if (!assign(c, key, value)) throw ValidationError(key, "unknown key");
    seen[key] = line;
  }
  for (const char* k : required)
    if (!seen.count(k)) throw ValidationError(k, "required");
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "grid.nx = " << c.grid.nx << '\n'
     << "grid.ny = " << c.grid.ny << '\n'
     << "grid.Lx = " << fmt(c.grid.lx) << '\n'
     << "grid.Ly = " << fmt(c.grid.ly) << '\n'
     << "time.T = " << fmt(c.time.T) << '\n'
     << "time.dt = " << fmt(c.time.dt) << '\n'
     << "model.beta = " << fmt(c.model.beta) << '\n'
     << "model.alpha = " << fmt(c.model.alpha) << '\n'
     << "kernel.radius = " << fmt(c.kernel.radius) << '\n'
     << "control.theta_min = " << fmt(c.control.theta_min) << '\n'
     << "control.theta_max = " << fmt(c.control.theta_max) << '\n'
     << "control.delta = " << fmt(c.control.delta) << '\n'
     << "control.theta = " << c.control.theta << '\n'
     << "init.m0 = " << c.init.m0 << '\n'
     << "init.phi0 = " << c.init.phi0 << '\n'
     << "target.phi_d = " << c.target.phi_d << '\n'
     << "opt.max_iters = " << c.opt.max_iters << '\n'
     << "opt.step0 = " << fmt(c.opt.step0) << '\n'
     << "opt.shrink = " << fmt(c.opt.shrink) << '\n'
     << "opt.c1 = " << fmt(c.opt.c1) << '\n'
     << "opt.s_min = " << fmt(c.opt.s_min) << '\n'
     << "opt.tol = " << fmt(c.opt.tol) << '\n'
     << "opt.step_rule = " << (c.opt.bb_step ? "bb" : "fixed") << '\n'
     << "io.snapshot_stride = " << c.io.snapshot_stride << '\n'
     << "io.out_dir = " << c.io.out_dir << '\n'
     << "seed = " << c.seed << '\n';
  return os.str();
}

Field realize_field(const std::string& spec, const Grid& grid, std::mt19937_64& rng,
                    const std::filesystem::path& base_dir, const std::string& key) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ValidationError(key, "field spec needs 'kind:args': '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);

  if (kind == "constant") return Field(grid, parse_double(key, trim(args)));
  if (kind == "cosine") {
    const std::vector<double> a = parse_args(key, args);
    if (a.size() != 3 && a.size() != 4) throw ValidationError(key, "cosine takes a,kx,ky[,offset]");
    const double amp = a[0];
    const double offset = a.size() == 4 ? a[3] : 0.0;
    const double tpi = 2.0 * std::numbers::pi;
    return Field::from_function(grid, [&](double x, double y) {
      return amp * std::cos(tpi * a[1] * x / grid.lx()) * std::cos(tpi * a[2] * y / grid.ly()) + offset;
    });
  }
  if (kind == "noise") {
    const std::vector<double> a = parse_args(key, args);
    if (a.size() != 2 || a[1] < 0.0 || a[1] != std::floor(a[1]))
      throw ValidationError(key, "noise takes amp,smooth_passes");
    std::uniform_real_distribution<double> dist(-a[0], a[0]);
    Field f(grid);
    for (double& v : f.values()) v = dist(rng);
    for (int pass = 0; pass < static_cast<int>(a[1]); ++pass) f = box_smooth(f);
    return f;
  }
  if (kind == "file") {
    std::filesystem::path path = trim(args);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    try {
      return read_snapshot(path).to_field(grid);
    } catch (const Error& e) {
      throw ValidationError(key, e.what());
    }
  }
  throw ValidationError(key, "unknown field spec kind '" + kind + "'");
}

std::vector<Field> realize_control(const std::string& spec, const Grid& grid, int nt, std::mt19937_64& rng,
                                   const std::filesystem::path& base_dir, const std::string& key) {
  std::vector<Field> out;
  out.reserve(nt);
  if (spec.rfind("noise:", 0) == 0) {
    for (int n = 0; n < nt; ++n) out.push_back(realize_field(spec, grid, rng, base_dir, key));
    return out;
  }
  const Field f = realize_field(spec, grid, rng, base_dir, key);
  out.assign(nt, f);
  return out;
}

Grid build_grid(const RunConfig& cfg) {
  try {
    return Grid(cfg.grid.nx, cfg.grid.ny, cfg.grid.lx, cfg.grid.ly);
  } catch (const Error& e) {
    throw ValidationError("grid", e.what());
  }
}

ModelParams build_params(const RunConfig& cfg) {
  const Grid grid = build_grid(cfg);
  std::shared_ptr<const Kernel> kernel;
  try {
    kernel = std::make_shared<const Kernel>(build_kernel(grid, cfg.kernel_radius()));
  } catch (const Error& e) {
    throw ValidationError("kernel.radius", e.what());
  }
  return ModelParams::make(grid, cfg.model.beta, cfg.model.alpha, cfg.time.T, cfg.time.dt, std::move(kernel));
}

InitData build_init(const RunConfig& cfg, const Grid& grid) {
  auto rm = stream(cfg.seed, 1);
  auto rp = stream(cfg.seed, 2);
  Field m0 = realize_field(cfg.init.m0, grid, rm, cfg.base_dir, "init.m0");
  Field phi0 = realize_field(cfg.init.phi0, grid, rp, cfg.base_dir, "init.phi0");
  return InitData::make(std::move(m0), std::move(phi0));
}

Problem build_problem(const RunConfig& cfg) {
  ModelParams params = build_params(cfg);
  InitData init = build_init(cfg, params.grid);
  const double lo = cfg.control.theta_min;
  const double hi = cfg.control.theta_max;

  auto rc = stream(cfg.seed, 3);
  ControlField theta = project_admissible(
      ControlField(realize_control(cfg.control.theta, params.grid, params.nt, rc, cfg.base_dir, "control.theta"), lo,
                   hi));

  Target target;
  auto rt = stream(cfg.seed, 4);
  const std::string& spec = cfg.target.phi_d;
  if (spec.rfind("twin:", 0) == 0) {
    const ControlField star(realize_control(spec.substr(5), params.grid, params.nt, rt, cfg.base_dir, "target.phi_d"),
                            lo, hi);
    target = solve_state(init, star, params).phi;
  } else {
    target = constant_target(realize_field(spec, params.grid, rt, cfg.base_dir, "target.phi_d"), params.nt);
  }
  return Problem{std::move(params), std::move(init), std::move(theta), std::move(target), cfg.control.delta, cfg.opt};
}

}  // namespace evapctl
