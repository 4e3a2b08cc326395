#include "evapctl/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "evapctl/errors.hpp"

namespace evapctl {
namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
  return r;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Field Snapshot::to_field(const Grid& grid) const {
  if (nx != grid.nx() || ny != grid.ny())
    throw Error(ErrorKind::ShapeMismatch, "snapshot is " + std::to_string(nx) + "x" + std::to_string(ny));
  return Field(grid, values);
}

void write_snapshot(const std::filesystem::path& path, const Field& f, double t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  os << "MCFIELD 1 " << f.grid().nx() << ' ' << f.grid().ny() << ' ' << format_double(t) << '\n';
  for (double v : f.values()) {
    std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    os.write(bytes, 8);
  }
  if (!os) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::string header;
  if (!std::getline(is, header)) throw Error(ErrorKind::FormatError, "missing header");
  std::istringstream hs(header);
  std::string magic;
  int version = 0;
  Snapshot s;
  hs >> magic >> version >> s.nx >> s.ny >> s.t;
  if (magic != "MCFIELD" || version != 1) throw Error(ErrorKind::FormatError, "bad magic in " + path.string());
  if (!hs || s.nx <= 0 || s.ny <= 0) throw Error(ErrorKind::FormatError, "bad header in " + path.string());
  s.values.resize(static_cast<std::size_t>(s.nx) * s.ny);
  for (double& v : s.values) {
    char bytes[8];
    if (!is.read(bytes, 8)) throw Error(ErrorKind::FormatError, "truncated payload in " + path.string());
    std::uint64_t bits;
    std::memcpy(&bits, bytes, 8);
    v = std::bit_cast<double>(to_little(bits));
  }
  return s;
}

void write_timeseries(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  os << kSeriesHeader << '\n';
  for (int n = 0; n <= traj.nt(); ++n) {
    const Field& m = traj.m[n];
    const Field& phi = traj.phi[n];
    const BoundsReport b = bounds_check(m, phi);
    os << n << ',' << format_double(traj.times[n]) << ',' << format_double(integral(m)) << ','
       << format_double(integral(phi)) << ',' << format_double(l2_norm(m)) << ',' << format_double(l2_norm(phi))
       << ',' << format_double(h1_norm(m)) << ',' << format_double(h1_norm(phi)) << ','
       << format_double(std::max(b.max_viol_m, 0.0)) << ',' << format_double(std::max(b.max_viol_order, 0.0))
       << '\n';
  }
  if (!os) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

std::string snapshot_name(const std::string& prefix, int n) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06d.mcf", prefix.c_str(), n);
  return buf;
}

void write_trajectory_snapshots(const std::filesystem::path& dir, const Trajectory& traj, int stride) {
  if (stride <= 0) return;
  for (int n = 0; n <= traj.nt(); ++n) {
    if (n % stride != 0 && n != traj.nt()) continue;
    write_snapshot(dir / snapshot_name("m", n), traj.m[n], traj.times[n]);
    write_snapshot(dir / snapshot_name("phi", n), traj.phi[n], traj.times[n]);
  }
}

}  // namespace evapctl
