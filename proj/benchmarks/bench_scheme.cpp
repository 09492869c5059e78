// The four scheme operations over AND policies of n attributes, n = 2..19,
// on both profiles. Arguments: (profile, n).

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "signcast/absc/scheme.hpp"

namespace {

using namespace signcast;
using crypto::CurveProfile;

struct World {
  absc::PublicParams pk;
  absc::MasterKey mk;
  policy::AttributeSet attrs;
  policy::AccessTree tree;
  absc::IssuedKeys keys;
  absc::SigncryptOutput out;
  Bytes msg = Bytes(1024, 0x42);
  SeededRng rng{7};

  World(CurveProfile profile, std::size_t n) : tree(policy::AccessTree::Leaf("x")) {
    auto [p, m] = absc::Setup(profile, rng);
    pk = p;
    mk = m;
    std::vector<policy::AccessTree> leaves;
    for (std::size_t i = 0; i < n; ++i) {
      attrs.insert("attr" + std::to_string(i));
      leaves.push_back(policy::AccessTree::Leaf("attr" + std::to_string(i)));
    }
    tree = policy::AccessTree::And(std::move(leaves));
    keys = absc::KeyGen(pk, mk, attrs, rng);
    out = absc::Signcrypt(pk, keys.sign, msg, tree, rng);
  }
};

World Make(const benchmark::State& state) {
  return World(static_cast<CurveProfile>(state.range(0)), static_cast<std::size_t>(state.range(1)));
}

void BM_Setup(benchmark::State& state) {
  World w = Make(state);
  for (auto _ : state) {
    auto fresh = absc::Setup(w.pk.profile, w.rng);
    benchmark::DoNotOptimize(absc::KeyGen(fresh.first, fresh.second, w.attrs, w.rng));
  }
}

void BM_Keygen(benchmark::State& state) {
  World w = Make(state);
  for (auto _ : state) benchmark::DoNotOptimize(absc::KeyGen(w.pk, w.mk, w.attrs, w.rng));
}

void BM_Signcrypt(benchmark::State& state) {
  World w = Make(state);
  for (auto _ : state) benchmark::DoNotOptimize(absc::Signcrypt(w.pk, w.keys.sign, w.msg, w.tree, w.rng));
}

void BM_Designcrypt(benchmark::State& state) {
  World w = Make(state);
  for (auto _ : state) {
    auto got = absc::Designcrypt(w.pk, w.out.st, w.out.ct, *w.keys.sk, w.keys.ver);
    if (!got) state.SkipWithError("designcrypt failed");
    benchmark::DoNotOptimize(got);
  }
}

void Sweep(benchmark::internal::Benchmark* b) {
  for (int profile : {0, 1}) {
    for (int n = 2; n <= 19; ++n) b->Args({profile, n});
  }
  b->ArgNames({"profile", "attributes"})->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_Setup)->Apply(Sweep);
BENCHMARK(BM_Keygen)->Apply(Sweep);
BENCHMARK(BM_Signcrypt)->Apply(Sweep);
BENCHMARK(BM_Designcrypt)->Apply(Sweep);

}  // namespace
