#pragma once

#include <memory>
#include <string>

#include "evapctl/convolution.hpp"
#include "evapctl/grid.hpp"

namespace evapctl {

enum class KernelKind { bump };

/// Interaction potential J >= 0, even, compactly supported in |p| < radius, with
/// discrete integral sum j hx hy = 1, plus its closed-form gradient.
///
/// Both fields are indexed by periodic offset: entry (i, j) holds the value at
/// offset (i', j') * (hx, hy) where i' is i folded into (-nx/2, nx/2].
class Kernel {
 public:
  const Grid& grid() const noexcept { return j_.grid(); }
  const Field& j() const noexcept { return j_; }
  const VectorField& gj() const noexcept { return gj_; }
  double radius() const noexcept { return radius_; }
  KernelKind kind() const noexcept { return kind_; }
  /// C in j = C * bump; normalizes the discrete integral.
  double normalization() const noexcept { return normalization_; }
  ConvMethod method() const noexcept { return method_; }

  Field conv(const Field& f) const;
  /// (gj_x * f, gj_y * f): the nonlocal drift field grad J * f.
  VectorField conv_grad(const Field& f) const;
  /// sum_i gj_i * v_i, the scalar pairing grad J * v for a vector field v.
  Field conv_grad_dot(const VectorField& v) const;
  /// Exact transpose of conv_grad under the cell-area inner product:
  /// inner(conv_grad(f), v) == inner(f, conv_grad_transpose(v)). Since gj is odd this is -conv_grad_dot(v).
  Field conv_grad_transpose(const VectorField& v) const;

  /// Discrete L1 norm of |grad J|: sum sqrt(gj_x^2 + gj_y^2) hx hy.
  double grad_l1() const;

 private:
  friend Kernel build_kernel(const Grid&, double, KernelKind, ConvMethod);
  Kernel(Field j, VectorField gj, double radius, KernelKind kind, double normalization, ConvMethod method);

  Field j_;
  VectorField gj_;
  double radius_;
  KernelKind kind_;
  double normalization_;
  ConvMethod method_;
  SparseKernel sj_;
  SparseKernel sgx_;
  SparseKernel sgy_;
};

/// Builds the normalized kernel. Throws Error(SupportTooLarge) if 2 radius >= min(Lx, Ly)
/// and Error(SupportUnresolved) if radius < 3 max(hx, hy).
Kernel build_kernel(const Grid& grid, double radius, KernelKind kind = KernelKind::bump,
                    ConvMethod method = ConvMethod::direct);

struct KernelReport {
  double radius = 0.0;
  double integral = 0.0;
  double max_value = 0.0;
  double value_at_origin = 0.0;
  long support_cells = 0;
  double even_residual = 0.0;  ///< max |j(p) - j(-p)|
  double odd_residual = 0.0;   ///< max |gj(p) + gj(-p)| over both components
  double grad_integral_x = 0.0;
  double grad_integral_y = 0.0;
  double grad_l1 = 0.0;
};

KernelReport kernel_report(const Kernel& k);

/// key=value lines, one per report entry.
std::string format_report(const KernelReport& r);

}  // namespace evapctl
