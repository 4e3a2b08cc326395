#pragma once

#include "evapctl/grid.hpp"
#include "evapctl/kernels.hpp"

namespace evapctl {

enum class ConvMethod {
  direct,  ///< sum over the nonzero kernel taps (normative)
  fft,     ///< product in the transform domain
};

/// A kernel Field compressed to its nonzero offsets. Index (i, j) of the source
/// field is the periodic offset (i, j); offsets are stored as signed values in
/// (-n/2, n/2].
class SparseKernel {
 public:
  explicit SparseKernel(const Field& k);

  const Grid& grid() const noexcept { return grid_; }
  const kernels::SparseTaps& taps() const noexcept { return taps_; }

  /// out(p) = hx hy sum_s k(s) f(p - s)
  Field apply(const Field& f) const;

 private:
  Grid grid_;
  kernels::SparseTaps taps_;
};

/// Periodic discrete convolution with the cell area folded in:
///   out(p) = sum_q k(p - q) f(q) hx hy.
/// Throws Error(GridMismatch) if k and f live on different grids.
Field circ_conv(const Field& k, const Field& f, ConvMethod method = ConvMethod::direct);

/// Periodic negation k(-p).
Field reflect(const Field& k);

}  // namespace evapctl
