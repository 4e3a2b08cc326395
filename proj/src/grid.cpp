#include "evapctl/grid.hpp"

#include <algorithm>

#include "evapctl/errors.hpp"
#include "evapctl/kernels.hpp"
#include "evapctl/spectral.hpp"

namespace evapctl {
namespace {

kernels::Shape shape_of(const Grid& g) { return {g.nx(), g.ny(), g.hx(), g.hy()}; }

}  // namespace

Grid::Grid(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < 4 || ny < 4) throw Error(ErrorKind::InvalidGrid, "nx and ny must be >= 4");
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw Error(ErrorKind::InvalidGrid, "Lx and Ly must be positive and finite");
}

Field::Field(const Grid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error(ErrorKind::ShapeMismatch, "field value count does not match grid");
}

Field Field::from_function(const Grid& grid, const std::function<double(double, double)>& f) {
  Field out(grid);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) out.values_[grid.index(i, j)] = f(grid.x(i), grid.y(j));
  return out;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Field& Field::operator*=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] *= other.values_[k];
  return *this;
}

Field& Field::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

Field& Field::operator+=(double s) noexcept {
  for (double& v : values_) v += s;
  return *this;
}

Field& Field::axpy(double s, const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += s * other.values_[k];
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, const Field& b) { return a *= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }
Field operator+(Field a, double s) { return a += s; }
Field operator+(double s, Field a) { return a += s; }
Field operator-(double s, Field a) {
  for (double& v : a.values()) v = s - v;
  return a;
}
Field operator-(Field a) { return a *= -1.0; }

VectorField::VectorField(Field fx, Field fy) : x(std::move(fx)), y(std::move(fy)) {
  require_same_grid(x.grid(), y.grid());
}

VectorField operator*(const Field& s, const VectorField& v) { return VectorField(s * v.x, s * v.y); }

VectorField operator+(const VectorField& a, const VectorField& b) { return VectorField(a.x + b.x, a.y + b.y); }
VectorField operator-(const VectorField& a, const VectorField& b) { return VectorField(a.x - b.x, a.y - b.y); }

Field dot(const VectorField& a, const VectorField& b) { return a.x * b.x + a.y * b.y; }

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw Error(ErrorKind::GridMismatch, "operands live on different grids");
}

VectorField grad(const Field& f) {
  VectorField out(f.grid());
  kernels::parallel::grad(shape_of(f.grid()), f.values(), out.x.values(), out.y.values());
  return out;
}

Field div(const VectorField& v) {
  Field out(v.grid());
  kernels::parallel::div(shape_of(v.grid()), v.x.values(), v.y.values(), out.values());
  return out;
}

Field laplacian(const Field& f) {
  Field out(f.grid());
  kernels::parallel::laplacian(shape_of(f.grid()), f.values(), out.values());
  return out;
}

double sum(const Field& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v;
  return acc;
}

double integral(const Field& f) { return sum(f) * f.grid().cell_area(); }

double inner(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc * a.grid().cell_area();
}

double inner(const VectorField& a, const VectorField& b) { return inner(a.x, b.x) + inner(a.y, b.y); }

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double dirichlet_form(const Field& u, const Field& v) {
  require_same_grid(u.grid(), v.grid());
  const Grid& g = u.grid();
  const double ix = 1.0 / g.hx();
  const double iy = 1.0 / g.hy();
  double acc = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double dux = (u.at(i + 1, j) - u.at(i, j)) * ix;
      const double dvx = (v.at(i + 1, j) - v.at(i, j)) * ix;
      const double duy = (u.at(i, j + 1) - u.at(i, j)) * iy;
      const double dvy = (v.at(i, j + 1) - v.at(i, j)) * iy;
      acc += dux * dvx + duy * dvy;
    }
  }
  return acc * g.cell_area();
}

double l2_norm(const Field& f) { return std::sqrt(inner(f, f)); }

double h1_norm(const Field& f) {
  const VectorField g = grad(f);
  return l2_norm(f) + std::sqrt(inner(g, g));
}

Norms norms(const Field& f) {
  Norms n;
  n.l2 = l2_norm(f);
  n.h1 = h1_norm(f);
  n.h_minus_1 = std::sqrt(Spectral::for_grid(f.grid())->h_minus_1_squared(f));
  return n;
}

}  // namespace evapctl
