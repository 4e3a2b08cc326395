#include "evapctl/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evapctl/errors.hpp"

namespace evapctl {
namespace {

double bump(double u) { return u < 1.0 ? std::exp(-1.0 / (1.0 - u)) : 0.0; }

int fold(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace

Kernel::Kernel(Field j, VectorField gj, double radius, KernelKind kind, double normalization, ConvMethod method)
    : j_(std::move(j)),
      gj_(std::move(gj)),
      radius_(radius),
      kind_(kind),
      normalization_(normalization),
      method_(method),
      sj_(j_),
      sgx_(gj_.x),
      sgy_(gj_.y) {}

Field Kernel::conv(const Field& f) const {
  if (method_ == ConvMethod::fft) return circ_conv(j_, f, ConvMethod::fft);
  return sj_.apply(f);
}

VectorField Kernel::conv_grad(const Field& f) const {
  if (method_ == ConvMethod::fft)
    return VectorField(circ_conv(gj_.x, f, ConvMethod::fft), circ_conv(gj_.y, f, ConvMethod::fft));
  return VectorField(sgx_.apply(f), sgy_.apply(f));
}

Field Kernel::conv_grad_dot(const VectorField& v) const {
  if (method_ == ConvMethod::fft)
    return circ_conv(gj_.x, v.x, ConvMethod::fft) + circ_conv(gj_.y, v.y, ConvMethod::fft);
  return sgx_.apply(v.x) + sgy_.apply(v.y);
}

Field Kernel::conv_grad_transpose(const VectorField& v) const { return -conv_grad_dot(v); }

double Kernel::grad_l1() const {
  double acc = 0.0;
  for (std::size_t k = 0; k < gj_.x.size(); ++k) acc += std::hypot(gj_.x[k], gj_.y[k]);
  return acc * grid().cell_area();
}

Kernel build_kernel(const Grid& grid, double radius, KernelKind kind, ConvMethod method) {
  if (!(2.0 * radius < std::min(grid.lx(), grid.ly())))
    throw Error(ErrorKind::SupportTooLarge, "2 * radius must be below min(Lx, Ly)");
  if (!(radius >= 3.0 * std::max(grid.hx(), grid.hy())))
    throw Error(ErrorKind::SupportUnresolved, "radius must be at least 3 * max(hx, hy)");

  const int nx = grid.nx();
  const int ny = grid.ny();
  const double r2 = radius * radius;
  Field j(grid);
  VectorField g(grid);
  for (int jj = 0; jj < ny; ++jj) {
    for (int ii = 0; ii < nx; ++ii) {
      const double px = fold(ii, nx) * grid.hx();
      const double py = fold(jj, ny) * grid.hy();
      const double u = (px * px + py * py) / r2;
      if (u >= 1.0) continue;
      const double b = bump(u);
      // d/dp exp(-1/(1-u)) = -exp(-1/(1-u)) * 2p / (r^2 (1-u)^2)
      const double s = -2.0 * b / (r2 * (1.0 - u) * (1.0 - u));
      j.at(ii, jj) = b;
      g.x.at(ii, jj) = s * px;
      g.y.at(ii, jj) = s * py;
    }
  }

  // Enforce exact parity: j even, gj odd, under periodic negation.
  Field je(grid);
  VectorField go(grid);
  for (int jj = 0; jj < ny; ++jj) {
    for (int ii = 0; ii < nx; ++ii) {
      je.at(ii, jj) = 0.5 * (j.at(ii, jj) + j.at(-ii, -jj));
      go.x.at(ii, jj) = 0.5 * (g.x.at(ii, jj) - g.x.at(-ii, -jj));
      go.y.at(ii, jj) = 0.5 * (g.y.at(ii, jj) - g.y.at(-ii, -jj));
    }
  }

  const double c = 1.0 / integral(je);
  je *= c;
  go.x *= c;
  go.y *= c;
  return Kernel(std::move(je), std::move(go), radius, kind, c, method);
}

KernelReport kernel_report(const Kernel& k) {
  KernelReport r;
  const Grid& g = k.grid();
  r.radius = k.radius();
  r.integral = integral(k.j());
  r.max_value = max_abs(k.j());
  r.value_at_origin = k.j().at(0, 0);
  for (double v : k.j().values())
    if (v > 0.0) ++r.support_cells;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      r.even_residual = std::max(r.even_residual, std::abs(k.j().at(i, j) - k.j().at(-i, -j)));
      r.odd_residual = std::max(r.odd_residual, std::abs(k.gj().x.at(i, j) + k.gj().x.at(-i, -j)));
      r.odd_residual = std::max(r.odd_residual, std::abs(k.gj().y.at(i, j) + k.gj().y.at(-i, -j)));
    }
  }
  r.grad_integral_x = integral(k.gj().x);
  r.grad_integral_y = integral(k.gj().y);
  r.grad_l1 = k.grad_l1();
  return r;
}

std::string format_report(const KernelReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "radius=" << r.radius << '\n'
     << "integral=" << r.integral << '\n'
     << "max_value=" << r.max_value << '\n'
     << "value_at_origin=" << r.value_at_origin << '\n'
     << "support_cells=" << r.support_cells << '\n'
     << "even_residual=" << r.even_residual << '\n'
     << "odd_residual=" << r.odd_residual << '\n'
     << "grad_integral_x=" << r.grad_integral_x << '\n'
     << "grad_integral_y=" << r.grad_integral_y << '\n'
     << "grad_l1=" << r.grad_l1 << '\n';
  return os.str();
}

}  // namespace evapctl
