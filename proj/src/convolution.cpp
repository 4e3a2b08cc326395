#include "evapctl/convolution.hpp"

#include "evapctl/spectral.hpp"

namespace evapctl {

SparseKernel::SparseKernel(const Field& k) : grid_(k.grid()) {
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v = k.at(i, j);
      if (v == 0.0) continue;
      taps_.di.push_back(i <= nx / 2 ? i : i - nx);
      taps_.dj.push_back(j <= ny / 2 ? j : j - ny);
      taps_.value.push_back(v);
    }
  }
}

Field SparseKernel::apply(const Field& f) const {
  require_same_grid(grid_, f.grid());
  Field out(grid_);
  kernels::parallel::convolve({grid_.nx(), grid_.ny(), grid_.hx(), grid_.hy()}, taps_, grid_.cell_area(),
                              f.values(), out.values());
  return out;
}

Field circ_conv(const Field& k, const Field& f, ConvMethod method) {
  require_same_grid(k.grid(), f.grid());
  if (method == ConvMethod::fft) return Spectral::for_grid(k.grid())->convolve(k, f);
  return SparseKernel(k).apply(f);
}

Field reflect(const Field& k) {
  Field out(k.grid());
  for (int j = 0; j < k.grid().ny(); ++j)
    for (int i = 0; i < k.grid().nx(); ++i) out.at(i, j) = k.at(-i, -j);
  return out;
}

}  // namespace evapctl
