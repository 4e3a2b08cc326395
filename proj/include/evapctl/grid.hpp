#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace evapctl {

/// Uniform periodic cell-centered grid on [0, Lx) x [0, Ly).
///
/// Cell (i, j) has center ((i + 0.5) hx, (j + 0.5) hy). Storage is row-major
/// with x fastest: linear index j * nx + i. Every reduction in this library walks
/// that order, so sums are reproducible bit for bit.
class Grid {
 public:
  /// Throws Error(InvalidGrid) unless nx, ny >= 4 and Lx, Ly > 0.
  Grid(int nx, int ny, double lx, double ly);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double hx() const noexcept { return lx_ / nx_; }
  double hy() const noexcept { return ly_ / ny_; }
  double cell_area() const noexcept { return hx() * hy(); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

  double x(int i) const noexcept { return (i + 0.5) * hx(); }
  double y(int j) const noexcept { return (j + 0.5) * hy(); }

  /// Periodic linear index; accepts any integers.
  std::size_t index(int i, int j) const noexcept {
    const int ii = ((i % nx_) + nx_) % nx_;
    const int jj = ((j % ny_) + ny_) % ny_;
    return static_cast<std::size_t>(jj) * nx_ + ii;
  }

  bool operator==(const Grid&) const = default;

 private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
};

/// Scalar samples at cell centers.
class Field {
 public:
  explicit Field(const Grid& grid, double value = 0.0);
  Field(const Grid& grid, std::vector<double> values);

  /// Samples f(x_i, y_j) at every cell center.
  static Field from_function(const Grid& grid, const std::function<double(double, double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator[](std::size_t k) noexcept { return values_[k]; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double& at(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
  double at(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool all_finite() const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(const Field& other);
  Field& operator*=(double s) noexcept;
  Field& operator+=(double s) noexcept;
  /// this += s * other
  Field& axpy(double s, const Field& other);

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator*(Field a, double s);
Field operator+(Field a, double s);
Field operator+(double s, Field a);
Field operator-(double s, Field a);
Field operator-(Field a);

/// Two components on one grid.
struct VectorField {
  Field x;
  Field y;

  explicit VectorField(const Grid& grid) : x(grid), y(grid) {}
  VectorField(Field fx, Field fy);

  const Grid& grid() const noexcept { return x.grid(); }
};

/// Pointwise (scalar * vector).
VectorField operator*(const Field& s, const VectorField& v);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
/// Pointwise dot product of two vector fields.
Field dot(const VectorField& a, const VectorField& b);

/// Throws Error(GridMismatch) if the grids differ.
void require_same_grid(const Grid& a, const Grid& b);

// Discrete operators (periodic, second order, centered).
VectorField grad(const Field& f);
Field div(const VectorField& v);
/// 5-point Laplacian.
Field laplacian(const Field& f);

/// Sum of values in row-major order (no cell-area factor).
double sum(const Field& f);
/// Discrete integral: sum(f) * hx * hy.
double integral(const Field& f);
/// Cell-area weighted inner product.
double inner(const Field& a, const Field& b);
double inner(const VectorField& a, const VectorField& b);
double max_abs(const Field& f);

/// Diffusion bilinear form sum (D+x u D+x v + D+y u D+y v) hx hy with forward
/// differences. Equals -inner(laplacian(u), v) exactly (summation by parts).
double dirichlet_form(const Field& u, const Field& v);

struct Norms {
  double l2 = 0.0;
  double h1 = 0.0;
  double h_minus_1 = 0.0;
};

/// l2 = sqrt(sum f^2 hx hy); h1 = l2 + l2(|grad f|); h_minus_1 from the Fourier
/// multiplier (1 + |kappa|^2)^(-1/2), see Spectral::h_minus_1_squared.
Norms norms(const Field& f);
double l2_norm(const Field& f);
/// l2 + l2(|grad f|), without the transform needed for h_minus_1.
double h1_norm(const Field& f);

}  // namespace evapctl
