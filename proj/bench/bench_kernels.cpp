// Serial reference vs OpenMP kernels, plus the FFT path and a full forward step.
// Range argument is the grid side n (n x n, unit square).

#include <benchmark/benchmark.h>

#include <random>

#include "evapctl/convolution.hpp"
#include "evapctl/forward.hpp"
#include "evapctl/kernel.hpp"
#include "evapctl/kernels.hpp"

using namespace evapctl;

namespace {

Field noise(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Field f(g);
  for (double& v : f.values()) v = d(rng);
  return f;
}

struct Case {
  Grid grid;
  kernels::Shape shape;
  Field f;
  Field a;
  Field b;
  explicit Case(int n)
      : grid(n, n, 1.0, 1.0),
        shape{n, n, grid.hx(), grid.hy()},
        f(noise(grid, 1)),
        a(grid),
        b(grid) {}
};

template <bool Parallel>
void BM_Laplacian(benchmark::State& st) {
  Case c(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::parallel::laplacian(c.shape, c.f.values(), c.a.values());
    else
      kernels::serial::laplacian(c.shape, c.f.values(), c.a.values());
    benchmark::DoNotOptimize(c.a.values().data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(c.grid.size()));
}

template <bool Parallel>
void BM_Grad(benchmark::State& st) {
  Case c(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::parallel::grad(c.shape, c.f.values(), c.a.values(), c.b.values());
    else
      kernels::serial::grad(c.shape, c.f.values(), c.a.values(), c.b.values());
    benchmark::DoNotOptimize(c.a.values().data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(c.grid.size()));
}

template <bool Parallel>
void BM_Convolve(benchmark::State& st) {
  Case c(static_cast<int>(st.range(0)));
  const Kernel k = build_kernel(c.grid, 0.1);
  const SparseKernel sk(k.j());
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::parallel::convolve(c.shape, sk.taps(), c.grid.cell_area(), c.f.values(), c.a.values());
    else
      kernels::serial::convolve(c.shape, sk.taps(), c.grid.cell_area(), c.f.values(), c.a.values());
    benchmark::DoNotOptimize(c.a.values().data());
  }
  st.counters["taps"] = static_cast<double>(sk.taps().size());
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(c.grid.size()));
}

void BM_ConvolveFft(benchmark::State& st) {
  Case c(static_cast<int>(st.range(0)));
  const Kernel k = build_kernel(c.grid, 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(circ_conv(k.j(), c.f, ConvMethod::fft));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(c.grid.size()));
}

void BM_ForwardStep(benchmark::State& st) {
  const Grid g(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)), 1.0, 1.0);
  const ModelParams p =
      ModelParams::make(g, 1.0, 1.0, 1e-3, 1e-3, std::make_shared<const Kernel>(build_kernel(g, 0.1)));
  const Field m = 0.2 * noise(g, 2);
  const Field phi(g, 0.5);
  const Field theta(g, 0.0);
  for (auto _ : st) benchmark::DoNotOptimize(step_state(m, phi, theta, p));
}

}  // namespace

BENCHMARK(BM_Laplacian<false>)->Name("laplacian/serial")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Laplacian<true>)->Name("laplacian/parallel")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Grad<false>)->Name("grad/serial")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Grad<true>)->Name("grad/parallel")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Convolve<false>)->Name("convolve/serial")->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_Convolve<true>)->Name("convolve/parallel")->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_ConvolveFft)->Name("convolve/fft")->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_ForwardStep)->Name("forward_step")->Arg(32)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
