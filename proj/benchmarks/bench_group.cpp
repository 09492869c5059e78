#include <benchmark/benchmark.h>

#include "signcast/crypto/group.hpp"

namespace {

using signcast::SeededRng;
using signcast::crypto::CurveProfile;
using signcast::crypto::GroupContext;

const GroupContext& Ctx(const benchmark::State& state) {
  return GroupContext::Get(static_cast<CurveProfile>(state.range(0)));
}

void BM_Pair(benchmark::State& state) {
  const auto& g = Ctx(state);
  SeededRng rng(1);
  const auto a = g.g1().Pow(g.RandomScalar(rng));
  const auto b = g.g2().Pow(g.RandomScalar(rng));
  for (auto _ : state) benchmark::DoNotOptimize(g.Pair(a, b));
}

void BM_G1Pow(benchmark::State& state) {
  const auto& g = Ctx(state);
  SeededRng rng(2);
  const auto k = g.RandomScalar(rng);
  for (auto _ : state) benchmark::DoNotOptimize(g.g1().Pow(k));
}

void BM_G2Pow(benchmark::State& state) {
  const auto& g = Ctx(state);
  SeededRng rng(3);
  const auto k = g.RandomScalar(rng);
  for (auto _ : state) benchmark::DoNotOptimize(g.g2().Pow(k));
}

void BM_GTPow(benchmark::State& state) {
  const auto& g = Ctx(state);
  SeededRng rng(4);
  const auto t = g.Pair(g.g1(), g.g2());
  const auto k = g.RandomScalar(rng);
  for (auto _ : state) benchmark::DoNotOptimize(t.Pow(k));
}

void BM_G1Decode(benchmark::State& state) {
  const auto& g = Ctx(state);
  const auto bytes = g.g1().ToBytes();
  for (auto _ : state) benchmark::DoNotOptimize(g.DecodeG1(bytes));
}

#define PROFILES Arg(static_cast<int>(CurveProfile::kSymmetric512))->Arg(static_cast<int>(CurveProfile::kAsymmetric159))

BENCHMARK(BM_Pair)->PROFILES->Unit(benchmark::kMillisecond);
BENCHMARK(BM_G1Pow)->PROFILES->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_G2Pow)->PROFILES->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GTPow)->PROFILES->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_G1Decode)->PROFILES->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
