#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "evapctl/forward.hpp"
#include "evapctl/grid.hpp"

namespace evapctl {

/// Contents of an MCFIELD file: ASCII header "MCFIELD 1 <nx> <ny> <t>\n" followed by
/// nx * ny IEEE-754 binary64 little-endian values, row-major.
struct Snapshot {
  int nx = 0;
  int ny = 0;
  double t = 0.0;
  std::vector<double> values;

  /// Throws Error(ShapeMismatch) if nx, ny differ from the grid.
  Field to_field(const Grid& grid) const;
};

/// Throws Error(IoError) on write failure.
void write_snapshot(const std::filesystem::path& path, const Field& f, double t);
/// Throws Error(IoError) if unreadable, Error(FormatError) on a bad header or truncated payload.
Snapshot read_snapshot(const std::filesystem::path& path);

inline constexpr const char* kSeriesHeader = "n,t,mass_m,mass_phi,l2_m,l2_phi,h1_m,h1_phi,viol_m,viol_phi";

/// series.csv: kSeriesHeader then one row per stored step n = 0..nt.
void write_timeseries(const std::filesystem::path& path, const Trajectory& traj);

/// Writes m_<n>.mcf and phi_<n>.mcf every `stride` steps (and the final step). stride 0 disables.
void write_trajectory_snapshots(const std::filesystem::path& dir, const Trajectory& traj, int stride);

/// Zero-padded file name "<prefix>_<n>.mcf".
std::string snapshot_name(const std::string& prefix, int n);

}  // namespace evapctl
