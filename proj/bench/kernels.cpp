// Serial reference vs OpenMP kernel, side by side.
//
//   slice_bench --benchmark_filter=Bareiss

#include <benchmark/benchmark.h>
#include <omp.h>

#include "slice/exact.hpp"
#include "slice/meander.hpp"
#include "slice/verify.hpp"

using namespace slice;

namespace {

// skew form of the eta functional, the matrix the regularity check ranks
exact::IntMatrix skew_for(int p, int q) {
  const auto pr = meander::CoprimePair::make(p, q);
  return verify::skew_form(pr, verify::eta_matrix(pr, verify::eta_and_h(pr)));
}

void BM_BareissSerial(benchmark::State& st) {
  const auto m = skew_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(exact::rank_bareiss_serial(m));
  st.counters["dim"] = m.rows();
}

void BM_BareissParallel(benchmark::State& st) {
  const auto m = skew_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(exact::rank_bareiss(m, omp_get_max_threads()));
  st.counters["dim"] = m.rows();
}

void BM_ModSerial(benchmark::State& st) {
  const auto m = skew_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const auto prime = exact::rank_primes()[0];
  for (auto _ : st) benchmark::DoNotOptimize(exact::rank_mod_serial(m, prime));
  st.counters["dim"] = m.rows();
}

void BM_ModParallel(benchmark::State& st) {
  const auto m = skew_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const auto prime = exact::rank_primes()[0];
  for (auto _ : st) benchmark::DoNotOptimize(exact::rank_mod(m, prime, omp_get_max_threads()));
  st.counters["dim"] = m.rows();
}

void BM_SweepSerial(benchmark::State& st) {
  verify::ReportOptions opt;
  opt.stabilizer_max_n = 14;
  for (auto _ : st) benchmark::DoNotOptimize(verify::verify_sweep_serial(static_cast<int>(st.range(0)), opt));
}

void BM_SweepParallel(benchmark::State& st) {
  verify::ReportOptions opt;
  opt.stabilizer_max_n = 14;
  for (auto _ : st)
    benchmark::DoNotOptimize(verify::verify_sweep(static_cast<int>(st.range(0)), opt, omp_get_max_threads()));
}

void BM_AtlasSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(meander::signature_atlas_serial(static_cast<int>(st.range(0))));
}

void BM_AtlasParallel(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(meander::signature_atlas(static_cast<int>(st.range(0)), omp_get_max_threads()));
}

}  // namespace

#define PAIRS Args({3, 7})->Args({5, 9})->Args({7, 11})->Unit(benchmark::kMillisecond)

BENCHMARK(BM_BareissSerial)->PAIRS;
BENCHMARK(BM_BareissParallel)->PAIRS->UseRealTime();
BENCHMARK(BM_ModSerial)->PAIRS;
BENCHMARK(BM_ModParallel)->PAIRS->UseRealTime();
BENCHMARK(BM_SweepSerial)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AtlasSerial)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AtlasParallel)->Arg(60)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
