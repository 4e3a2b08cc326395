#include "evapctl/kernels.hpp"

#include <algorithm>

#ifdef EVAPCTL_HAVE_OPENMP
#include <omp.h>
#endif

namespace evapctl::kernels {
namespace {

inline int wrap(int k, int n) noexcept { return ((k % n) + n) % n; }

// Row kernels shared by the serial and parallel drivers.

inline void grad_row(const Shape& s, const double* f, double* gx, double* gy, int j) noexcept {
  const int nx = s.nx;
  const double* row = f + static_cast<std::ptrdiff_t>(j) * nx;
  const double* up = f + static_cast<std::ptrdiff_t>(wrap(j + 1, s.ny)) * nx;
  const double* dn = f + static_cast<std::ptrdiff_t>(wrap(j - 1, s.ny)) * nx;
  const double cx = 1.0 / (2.0 * s.hx);
  const double cy = 1.0 / (2.0 * s.hy);
  double* ox = gx + static_cast<std::ptrdiff_t>(j) * nx;
  double* oy = gy + static_cast<std::ptrdiff_t>(j) * nx;
  for (int i = 0; i < nx; ++i) {
    const int ip = i + 1 == nx ? 0 : i + 1;
    const int im = i == 0 ? nx - 1 : i - 1;
    ox[i] = (row[ip] - row[im]) * cx;
    oy[i] = (up[i] - dn[i]) * cy;
  }
}

inline void div_row(const Shape& s, const double* vx, const double* vy, double* out, int j) noexcept {
  const int nx = s.nx;
  const double* rx = vx + static_cast<std::ptrdiff_t>(j) * nx;
  const double* up = vy + static_cast<std::ptrdiff_t>(wrap(j + 1, s.ny)) * nx;
  const double* dn = vy + static_cast<std::ptrdiff_t>(wrap(j - 1, s.ny)) * nx;
  const double cx = 1.0 / (2.0 * s.hx);
  const double cy = 1.0 / (2.0 * s.hy);
  double* o = out + static_cast<std::ptrdiff_t>(j) * nx;
  for (int i = 0; i < nx; ++i) {
    const int ip = i + 1 == nx ? 0 : i + 1;
    const int im = i == 0 ? nx - 1 : i - 1;
    o[i] = (rx[ip] - rx[im]) * cx + (up[i] - dn[i]) * cy;
  }
}

inline void laplacian_row(const Shape& s, const double* f, double* out, int j) noexcept {
  const int nx = s.nx;
  const double* row = f + static_cast<std::ptrdiff_t>(j) * nx;
  const double* up = f + static_cast<std::ptrdiff_t>(wrap(j + 1, s.ny)) * nx;
  const double* dn = f + static_cast<std::ptrdiff_t>(wrap(j - 1, s.ny)) * nx;
  const double ax = 1.0 / (s.hx * s.hx);
  const double ay = 1.0 / (s.hy * s.hy);
  double* o = out + static_cast<std::ptrdiff_t>(j) * nx;
  for (int i = 0; i < nx; ++i) {
    const int ip = i + 1 == nx ? 0 : i + 1;
    const int im = i == 0 ? nx - 1 : i - 1;
    o[i] = (row[ip] + row[im] - 2.0 * row[i]) * ax + (up[i] + dn[i] - 2.0 * row[i]) * ay;
  }
}

// Taps are accumulated in their stored order for every output cell.
inline void convolve_row(const Shape& s, const SparseTaps& taps, double weight, const double* f,
                         double* out, int j) noexcept {
  const int nx = s.nx;
  double* o = out + static_cast<std::ptrdiff_t>(j) * nx;
  std::fill(o, o + nx, 0.0);
  for (std::size_t t = 0; t < taps.size(); ++t) {
    const double v = taps.value[t];
    const int shift = wrap(taps.di[t], nx);
    const double* src = f + static_cast<std::ptrdiff_t>(wrap(j - taps.dj[t], s.ny)) * nx;
    // source column i - shift, split at the periodic seam
    for (int i = 0; i < shift; ++i) o[i] += v * src[i - shift + nx];
    for (int i = shift; i < nx; ++i) o[i] += v * src[i - shift];
  }
  for (int i = 0; i < nx; ++i) o[i] *= weight;
}

}  // namespace

namespace serial {

void grad(const Shape& s, std::span<const double> f, std::span<double> gx, std::span<double> gy) {
  for (int j = 0; j < s.ny; ++j) grad_row(s, f.data(), gx.data(), gy.data(), j);
}

void div(const Shape& s, std::span<const double> vx, std::span<const double> vy, std::span<double> out) {
  for (int j = 0; j < s.ny; ++j) div_row(s, vx.data(), vy.data(), out.data(), j);
}

void laplacian(const Shape& s, std::span<const double> f, std::span<double> out) {
  for (int j = 0; j < s.ny; ++j) laplacian_row(s, f.data(), out.data(), j);
}

void convolve(const Shape& s, const SparseTaps& taps, double weight, std::span<const double> f,
              std::span<double> out) {
  for (int j = 0; j < s.ny; ++j) convolve_row(s, taps, weight, f.data(), out.data(), j);
}

}  // namespace serial

namespace parallel {

void grad(const Shape& s, std::span<const double> f, std::span<double> gx, std::span<double> gy) {
#pragma omp parallel for schedule(static)
  for (int j = 0; j < s.ny; ++j) grad_row(s, f.data(), gx.data(), gy.data(), j);
}

void div(const Shape& s, std::span<const double> vx, std::span<const double> vy, std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (int j = 0; j < s.ny; ++j) div_row(s, vx.data(), vy.data(), out.data(), j);
}

void laplacian(const Shape& s, std::span<const double> f, std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (int j = 0; j < s.ny; ++j) laplacian_row(s, f.data(), out.data(), j);
}

void convolve(const Shape& s, const SparseTaps& taps, double weight, std::span<const double> f,
              std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (int j = 0; j < s.ny; ++j) convolve_row(s, taps, weight, f.data(), out.data(), j);
}

}  // namespace parallel

int max_threads() {
#ifdef EVAPCTL_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace evapctl::kernels
