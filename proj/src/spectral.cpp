#include "evapctl/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "evapctl/errors.hpp"

namespace evapctl {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {}
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

struct Spectral::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::size_t n_real = 0;
  std::size_t n_complex = 0;
  int nxc = 0;  // nx / 2 + 1 complex columns
};

std::shared_ptr<const Spectral> Spectral::for_grid(const Grid& grid) {
  using Key = std::tuple<int, int, double, double>;
  static std::map<Key, std::shared_ptr<const Spectral>> cache;
  static std::mutex cache_mutex;
  const Key key{grid.nx(), grid.ny(), grid.lx(), grid.ly()};
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto s = std::make_shared<const Spectral>(grid);
  cache.emplace(key, s);
  return s;
}

Spectral::Spectral(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  plans_->nxc = nx / 2 + 1;
  plans_->n_real = grid.size();
  plans_->n_complex = static_cast<std::size_t>(ny) * plans_->nxc;
  {
    std::lock_guard lock(planner_mutex());
    RealBuffer r(plans_->n_real);
    ComplexBuffer c(plans_->n_complex);
    plans_->forward = fftw_plan_dft_r2c_2d(ny, nx, r.data, c.data, FFTW_ESTIMATE);
    plans_->backward = fftw_plan_dft_c2r_2d(ny, nx, c.data, r.data, FFTW_ESTIMATE);
  }
  const double tpi = 2.0 * std::numbers::pi;
  eig_x_.resize(nx);
  eig_y_.resize(ny);
  for (int k = 0; k < nx; ++k)
    eig_x_[k] = 2.0 / (grid.hx() * grid.hx()) * (1.0 - std::cos(tpi * k / nx));
  for (int k = 0; k < ny; ++k)
    eig_y_[k] = 2.0 / (grid.hy() * grid.hy()) * (1.0 - std::cos(tpi * k / ny));
}

Spectral::~Spectral() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

double Spectral::laplacian_eigenvalue(int kx, int ky) const { return eig_x_.at(kx) + eig_y_.at(ky); }

Field Spectral::solve_shifted(const Field& rhs, double tau) const {
  require_same_grid(rhs.grid(), grid_);
  const int ny = grid_.ny();
  const int nxc = plans_->nxc;
  RealBuffer r(plans_->n_real);
  ComplexBuffer c(plans_->n_complex);
  std::copy(rhs.values().begin(), rhs.values().end(), r.data);
  fftw_execute_dft_r2c(plans_->forward, r.data, c.data);
  const double inv_n = 1.0 / static_cast<double>(grid_.size());
  for (int ky = 0; ky < ny; ++ky) {
    for (int kx = 0; kx < nxc; ++kx) {
      const double d = inv_n / (1.0 + tau * (eig_x_[kx] + eig_y_[ky]));
      fftw_complex& z = c.data[static_cast<std::size_t>(ky) * nxc + kx];
      z[0] *= d;
      z[1] *= d;
    }
  }
  fftw_execute_dft_c2r(plans_->backward, c.data, r.data);
  Field out(grid_);
  std::copy(r.data, r.data + plans_->n_real, out.values().begin());
  return out;
}

double Spectral::h_minus_1_squared(const Field& f) const {
  require_same_grid(f.grid(), grid_);
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  const int nxc = plans_->nxc;
  RealBuffer r(plans_->n_real);
  ComplexBuffer c(plans_->n_complex);
  std::copy(f.values().begin(), f.values().end(), r.data);
  fftw_execute_dft_r2c(plans_->forward, r.data, c.data);
  const double tpi = 2.0 * std::numbers::pi;
  const double inv_n = 1.0 / static_cast<double>(grid_.size());
  double acc = 0.0;
  for (int ky = 0; ky < ny; ++ky) {
    const int sy = ky <= ny / 2 ? ky : ky - ny;
    const double kapy = tpi * sy / grid_.ly();
    for (int kx = 0; kx < nxc; ++kx) {
      const double kapx = tpi * kx / grid_.lx();
      // half-spectrum storage: columns other than 0 and the even-nx Nyquist stand for two modes
      const bool self_conjugate = kx == 0 || (nx % 2 == 0 && kx == nx / 2);
      const double mult = self_conjugate ? 1.0 : 2.0;
      const fftw_complex& z = c.data[static_cast<std::size_t>(ky) * nxc + kx];
      const double mag2 = (z[0] * z[0] + z[1] * z[1]) * inv_n * inv_n;
      acc += mult * mag2 / (1.0 + kapx * kapx + kapy * kapy);
    }
  }
  return acc * grid_.lx() * grid_.ly();
}

Field Spectral::convolve(const Field& k, const Field& f) const {
  require_same_grid(k.grid(), grid_);
  require_same_grid(f.grid(), grid_);
  const int nxc = plans_->nxc;
  RealBuffer r(plans_->n_real);
  ComplexBuffer ck(plans_->n_complex);
  ComplexBuffer cf(plans_->n_complex);
  std::copy(k.values().begin(), k.values().end(), r.data);
  fftw_execute_dft_r2c(plans_->forward, r.data, ck.data);
  std::copy(f.values().begin(), f.values().end(), r.data);
  fftw_execute_dft_r2c(plans_->forward, r.data, cf.data);
  const double scale = grid_.cell_area() / static_cast<double>(grid_.size());
  for (std::size_t q = 0; q < static_cast<std::size_t>(grid_.ny()) * nxc; ++q) {
    const std::complex<double> a(ck.data[q][0], ck.data[q][1]);
    const std::complex<double> b(cf.data[q][0], cf.data[q][1]);
    const std::complex<double> p = a * b * scale;
    cf.data[q][0] = p.real();
    cf.data[q][1] = p.imag();
  }
  fftw_execute_dft_c2r(plans_->backward, cf.data, r.data);
  Field out(grid_);
  std::copy(r.data, r.data + plans_->n_real, out.values().begin());
  return out;
}

}  // namespace evapctl
