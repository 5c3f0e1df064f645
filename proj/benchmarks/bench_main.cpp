#include <benchmark/benchmark.h>

#include <cstdint>

#include "psd/covering.hpp"
#include "psd/diophantine.hpp"
#include "psd/envelope.hpp"
#include "psd/ps_seq.hpp"
#include "psd/rigor.hpp"

using namespace psd;

namespace {

void BM_FloorPowRational(benchmark::State& state) {
  const Alpha alpha = Alpha::parse("7/3");
  std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(floor_pow(static_cast<unsigned long>(n), alpha));
    ++n;
  }
}
BENCHMARK(BM_FloorPowRational)->Arg(1000)->Arg(1000000);

void BM_FloorPowDecimal(benchmark::State& state) {
  const Alpha alpha = Alpha::parse("3.1416");
  std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(floor_pow(static_cast<unsigned long>(n), alpha));
    ++n;
  }
}
BENCHMARK(BM_FloorPowDecimal)->Arg(1000)->Arg(1000000);

void BM_IsMember(benchmark::State& state) {
  const Alpha alpha = Alpha::parse("3/2");
  BigInt m = 1000000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_member(m, alpha));
    ++m;
  }
}
BENCHMARK(BM_IsMember);

void BM_PsRange(benchmark::State& state) {
  const Alpha alpha = Alpha::parse("7/5");
  for (auto _ : state) benchmark::DoNotOptimize(ps_range(alpha, static_cast<std::uint64_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PsRange)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Search(benchmark::State& state) {
  const auto eq = LinearEquation::parse("1/2,1/2");
  const Alpha alpha = Alpha::parse("3/2");
  for (auto _ : state) benchmark::DoNotOptimize(search_solutions(eq, alpha, static_cast<std::uint64_t>(state.range(0))));
}
BENCHMARK(BM_Search)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_CriticalPoint(benchmark::State& state) {
  const Envelope env{{1, 1}, {Rational(1, 2), Rational(3, 2)}};
  for (auto _ : state) benchmark::DoNotOptimize(critical_point(env));
}
BENCHMARK(BM_CriticalPoint)->Unit(benchmark::kMicrosecond);

void BM_CoverInterval(benchmark::State& state) {
  const Envelope env = Envelope::from_indices({Rational(1, 2), Rational(1, 2)}, {180, 231}, 200);
  for (auto _ : state) benchmark::DoNotOptimize(cover_interval(env, 200, 4.0, 4.5, 5.0));
}
BENCHMARK(BM_CoverInterval)->Unit(benchmark::kMicrosecond);

void BM_CoveringEnumeration(benchmark::State& state) {
  CoveringParams p;
  p.b = {2, Rational(1, 2)};
  p.beta = 4;
  p.s = 4.5;
  p.t = 4.6;
  p.gamma = 8;
  p.M = 3;
  p.R = static_cast<std::uint64_t>(state.range(0));
  p.validate();
  EnumerateOptions opts;
  opts.include_empty = state.range(1) != 0;
  for (auto _ : state) {
    std::uint64_t count = 0;
    for_each_cover(p, opts, [&](const CoverRecord&) { ++count; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_CoveringEnumeration)->Args({100, 1})->Args({100, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
