#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "evapctl/adjoint.hpp"
#include "evapctl/forward.hpp"
#include "evapctl/optimize.hpp"

namespace evapctl {

/// Flat "section.key = value" run configuration ('#' starts a comment).
///
/// Field specs (init.m0, init.phi0, target.phi_d, control.theta):
///   constant:<c>
///   cosine:<a>,<kx>,<ky>[,<offset>]   a cos(2 pi kx x / Lx) cos(2 pi ky y / Ly) + offset
///   noise:<amp>,<smooth_passes>       seeded uniform in [-amp, amp], then 3x3 box smoothing passes
///   file:<path>                       MCFIELD snapshot
/// target.phi_d additionally accepts twin:<field spec>, the trajectory produced by that control.
/// For control specs, noise draws a fresh field per time slice; the others are constant in time.
struct RunConfig {
  struct GridSection {
    int nx = 0;
    int ny = 0;
    double lx = 1.0;
    double ly = 1.0;
    bool operator==(const GridSection&) const = default;
  } grid;
  struct TimeSection {
    double T = 0.0;
    double dt = 0.0;
    bool operator==(const TimeSection&) const = default;
  } time;
  struct ModelSection {
    double beta = 0.0;
    double alpha = 0.0;
    bool operator==(const ModelSection&) const = default;
  } model;
  struct KernelSection {
    double radius = 0.0;  ///< 0 selects the default 0.1 * min(Lx, Ly)
    bool operator==(const KernelSection&) const = default;
  } kernel;
  struct ControlSection {
    double theta_min = 0.0;
    double theta_max = 1.0;
    double delta = 1e-3;
    std::string theta = "constant:0";
    bool operator==(const ControlSection&) const = default;
  } control;
  struct InitSection {
    std::string m0;
    std::string phi0;
    bool operator==(const InitSection&) const = default;
  } init;
  struct TargetSection {
    std::string phi_d = "constant:1";
    bool operator==(const TargetSection&) const = default;
  } target;
  OptConfig opt;
  struct IoSection {
    int snapshot_stride = 50;
    std::string out_dir = "out";
    bool operator==(const IoSection&) const = default;
  } io;
  std::uint64_t seed = 42;

  /// Directory that relative "file:" specs are resolved against.
  std::filesystem::path base_dir;

  double kernel_radius() const;
  bool operator==(const RunConfig& o) const;
};

/// Parses and validates. Throws ParseError(line) on malformed lines and
/// ValidationError(key, reason) on missing, unknown or out-of-range values,
/// including (A2) on the realized initial fields and (A4) on the control bounds.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
/// Inverse of parse_config: every key written, values at full precision.
std::string serialize_config(const RunConfig& cfg);

/// Realizes a field spec on the grid. Throws ValidationError(key, ...) for bad specs.
Field realize_field(const std::string& spec, const Grid& grid, std::mt19937_64& rng,
                    const std::filesystem::path& base_dir = {}, const std::string& key = "field");
/// nt control slices from a field spec.
std::vector<Field> realize_control(const std::string& spec, const Grid& grid, int nt, std::mt19937_64& rng,
                                   const std::filesystem::path& base_dir = {}, const std::string& key = "control");

/// Everything a command needs, realized from a RunConfig.
struct Problem {
  ModelParams params;
  InitData init;
  ControlField theta;  ///< control.theta, projected onto the box
  Target target;
  double delta = 0.0;
  OptConfig opt;
};

Grid build_grid(const RunConfig& cfg);
ModelParams build_params(const RunConfig& cfg);
InitData build_init(const RunConfig& cfg, const Grid& grid);
/// Realizes the target; "twin:" specs run the forward model.
Problem build_problem(const RunConfig& cfg);

}  // namespace evapctl
