// Serial reference kernels against the FFT/OpenMP paths.
//
//   ./bench_kernels --benchmark_filter=Rhs
//
// The Threads variants pin the OpenMP team size; on a single-core machine
// they only measure scheduling overhead.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>
#include <vector>

#include "egl/evolution.hpp"
#include "egl/lagrangian.hpp"
#include "egl/reference.hpp"
#include "egl/transform.hpp"

namespace {

std::vector<double> random_spectrum(const egl::Grid& g) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  const int m = g.modes();
  std::vector<double> a(static_cast<std::size_t>(m) * m);
  for (int j = 1; j <= m; ++j)
    for (int k = 1; k <= m; ++k) a[static_cast<std::size_t>(j - 1) * m + k - 1] = d(rng) / (j * j + k * k);
  return a;
}

void BM_SynthesizeRef(benchmark::State& st) {
  const egl::Grid g(static_cast<int>(st.range(0)));
  const auto a = egl::pad_spectrum(g, random_spectrum(g));
  std::vector<double> out(a.size());
  for (auto _ : st) {
    egl::ref::synthesize(g, a, egl::Parity::odd, egl::Parity::even, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_SynthesizeFast(benchmark::State& st) {
  const egl::Grid g(static_cast<int>(st.range(0)));
  const auto a = egl::pad_spectrum(g, random_spectrum(g));
  const auto& tr = egl::quadrant_transform(g.n());
  std::vector<double> out(a.size());
  for (auto _ : st) {
    tr.synthesize(a, egl::Parity::odd, egl::Parity::even, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_RhsRef(benchmark::State& st) {
  const egl::Grid g(static_cast<int>(st.range(0)));
  const auto a = random_spectrum(g);
  for (auto _ : st) benchmark::DoNotOptimize(egl::ref::advection_rhs(g, a));
}

void BM_RhsFast(benchmark::State& st) {
  const egl::Grid g(static_cast<int>(st.range(0)));
  const auto a = random_spectrum(g);
  for (auto _ : st) benchmark::DoNotOptimize(egl::rhs_spectrum(g, a));
}

void BM_RhsThreads(benchmark::State& st) {
  const egl::Grid g(256);
  const auto a = random_spectrum(g);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(egl::rhs_spectrum(g, a));
  omp_set_num_threads(saved);
}

void BM_VelocityAtRef(benchmark::State& st) {
  const egl::Grid g(static_cast<int>(st.range(0)));
  const auto a = random_spectrum(g);
  for (auto _ : st) benchmark::DoNotOptimize(egl::ref::velocity_at(g, a, {0.123, 0.456}));
}

void BM_VelocityAtFast(benchmark::State& st) {
  const egl::Grid g(static_cast<int>(st.range(0)));
  const auto a = random_spectrum(g);
  for (auto _ : st) benchmark::DoNotOptimize(egl::velocity_at(g, a, {0.123, 0.456}));
}

}  // namespace

BENCHMARK(BM_SynthesizeRef)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_SynthesizeFast)->Arg(32)->Arg(64)->Arg(128)->Arg(512);
BENCHMARK(BM_RhsRef)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RhsFast)->Arg(32)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RhsThreads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VelocityAtRef)->Arg(64)->Arg(256);
BENCHMARK(BM_VelocityAtFast)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
