#include <benchmark/benchmark.h>

#include "signcast/absc/codec.hpp"
#include "signcast/ledger/chain.hpp"
#include "signcast/policy/parser.hpp"

namespace {

using namespace signcast;

struct Fixture {
  SeededRng rng{9};
  std::pair<absc::PublicParams, absc::MasterKey> keys = absc::Setup(crypto::CurveProfile::kAsymmetric159, rng);
  std::pair<absc::SigningKey, absc::VerificationKey> pair = absc::IssueSigningPair(keys.first, keys.second, rng);
  ledger::PseudoId publisher = ledger::PseudoId::Random(rng);
  ledger::PseudoId validator = ledger::PseudoId::Random(rng);
  ledger::PublisherRegistry registry{keys.first};
  std::optional<ledger::ValidatorSet> vs;
  std::vector<ledger::Block> blocks{ledger::Genesis()};

  explicit Fixture(std::size_t records) {
    registry.Register(publisher, pair.second);
    vs.emplace(std::vector<ledger::Validator>{{validator, pair.second}}, 1, 15);
    const auto digest = absc::PublisherKeyDigest(keys.first, pair.second);
    for (std::size_t i = 0; i < records; ++i) {
      auto out = absc::Signcrypt(keys.first, pair.first, AsBytes("firmware image"),
                                 policy::ParsePolicy("firmware and model-x"), rng);
      auto rec = ledger::Record::Make(digest, publisher, std::move(out.st), std::move(out.ct));
      blocks.push_back(ledger::ProposeBlock(blocks.back(), std::move(rec), validator, 1000 + 15 * i));
    }
  }
};

void BM_BlockHash(benchmark::State& state) {
  Fixture f(1);
  for (auto _ : state) benchmark::DoNotOptimize(f.blocks[1].ComputeHash());
}

void BM_BlockDecode(benchmark::State& state) {
  Fixture f(1);
  const Bytes bytes = f.blocks[1].Encode();
  for (auto _ : state) benchmark::DoNotOptimize(ledger::Block::Decode(bytes));
}

void BM_VerifyChain(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto v = ledger::VerifyChain(f.blocks, *f.vs, f.registry);
    if (!v.ok()) state.SkipWithError("chain rejected");
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_BlockHash)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BlockDecode)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VerifyChain)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
