// Serial reference kernels against the FFT/OpenMP versions on the same inputs.
#include <benchmark/benchmark.h>

#include <cmath>

#include "rbslip/grid.hpp"
#include "rbslip/operators.hpp"
#include "rbslip/reference.hpp"
#include "rbslip/solver.hpp"
#include "rbslip/verify.hpp"

using namespace rbslip;

namespace {

struct Inputs {
  MappedGrid g;
  ScalarField f, psi;
  explicit Inputs(int n)
      : g(rough_fixture(), n, n + 1),
        f(sample_flat(g, [](double x1, double x2) { return std::sin(6.283185307179586 * x1) * std::exp(x2); })),
        psi(sample_flat(g, [](double x1, double x2) { return std::cos(6.283185307179586 * x1) * x2 * (1 - x2); })) {}
};

void BM_d1_reference(benchmark::State& st) {
  const Inputs in(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::d1(in.f, in.g));
}
void BM_d1_fft(benchmark::State& st) {
  const Inputs in(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(d1(in.f, in.g));
}
void BM_L_tilde_reference(benchmark::State& st) {
  const Inputs in(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::apply_L_tilde(in.f, in.g));
}
void BM_L_tilde(benchmark::State& st) {
  const Inputs in(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(apply_L_tilde(in.f, in.g));
}
void BM_advection_reference(benchmark::State& st) {
  const Inputs in(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::advection_skew(in.psi, in.f, in.g));
}
void BM_advection(benchmark::State& st) {
  const Inputs in(static_cast<int>(st.range(0)));
  const auto [b, t] = boundary_frames(rough_fixture(), in.g.n1, FourierSeries{1.0, 1.0, {}});
  const Stepper stepper(in.g, b, t, PhysicalParams{1e5, 10.0});
  for (auto _ : st) benchmark::DoNotOptimize(stepper.advection(in.psi, in.f));
}

}  // namespace

BENCHMARK(BM_d1_reference)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_d1_fft)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_L_tilde_reference)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_L_tilde)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_advection_reference)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_advection)->Arg(32)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
