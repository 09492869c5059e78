#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "signcast/harness/bench.hpp"
#include "signcast/harness/scenario.hpp"
#include "signcast/nodes/smart_device.hpp"
#include "signcast/policy/parser.hpp"

namespace signcast::harness {
namespace {

using crypto::CurveProfile;

BenchResult Row(BenchOp op, CurveProfile p, std::size_t n, double median) {
  BenchResult r;
  r.op = op;
  r.profile = p;
  r.attribute_count = n;
  r.trials = 5;
  r.mean_ms = median + 0.25;
  r.min_ms = median - 0.5;
  r.max_ms = median + 1.125;
  r.median_ms = median;
  return r;
}

TEST(Bench, ParseAndNames) {
  for (BenchOp op : AllBenchOps()) EXPECT_EQ(ParseBenchOp(ToString(op)), op);
  EXPECT_EQ(AllBenchOps().size(), 4u);
  EXPECT_THROW(ParseBenchOp("encrypt"), ConfigError);
}

TEST(Bench, CsvRoundTrip) {
  const std::vector<BenchResult> rows{Row(BenchOp::kSigncrypt, CurveProfile::kSymmetric512, 2, 10.5),
                                      Row(BenchOp::kSigncrypt, CurveProfile::kSymmetric512, 3, 12.75),
                                      Row(BenchOp::kSetup, CurveProfile::kAsymmetric159, 2, 3.0)};
  std::stringstream ss;
  WriteBenchCsv(ss, rows);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "operation,profile,attribute_count,trials,mean_ms,min_ms,max_ms,median_ms");
  const auto back = ReadBenchCsv(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].op, rows[i].op);
    EXPECT_EQ(back[i].profile, rows[i].profile);
    EXPECT_EQ(back[i].attribute_count, rows[i].attribute_count);
    EXPECT_NEAR(back[i].median_ms, rows[i].median_ms, 1e-6);
    EXPECT_NEAR(back[i].max_ms, rows[i].max_ms, 1e-6);
  }
  std::stringstream bad("operation,profile\nsigncrypt,SS512\n");
  EXPECT_THROW(ReadBenchCsv(bad), DecodeError);
}

TEST(Bench, CountInversionsUsesMediansInAttributeOrder) {
  const auto p = CurveProfile::kSymmetric512;
  const std::vector<BenchResult> rows{
      Row(BenchOp::kKeygen, p, 4, 9), Row(BenchOp::kKeygen, p, 2, 5), Row(BenchOp::kKeygen, p, 3, 7),
      Row(BenchOp::kKeygen, p, 5, 8),  // one drop: 9 -> 8
      Row(BenchOp::kKeygen, CurveProfile::kAsymmetric159, 2, 100), Row(BenchOp::kSetup, p, 2, 1),
  };
  EXPECT_EQ(CountInversions(rows, BenchOp::kKeygen, p), 1u);
  EXPECT_EQ(CountInversions(rows, BenchOp::kSetup, p), 0u);
  EXPECT_EQ(CountInversions(rows, BenchOp::kDesigncrypt, p), 0u);
}

TEST(Bench, ConfigValidationAndTinyRun) {
  BenchConfig c;
  c.trials = 4;
  EXPECT_THROW(RunBench(c), ConfigError);
  c.trials = 5;
  c.min_attributes = 5;
  c.max_attributes = 4;
  EXPECT_THROW(RunBench(c), ConfigError);
  c.profiles = {CurveProfile::kAsymmetric159};
  c.ops = {BenchOp::kKeygen};
  c.min_attributes = 2;
  c.max_attributes = 3;
  const auto rows = RunBench(c);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.trials, 5u);
    EXPECT_LE(r.min_ms, r.median_ms);
    EXPECT_LE(r.median_ms, r.max_ms);
    EXPECT_GT(r.min_ms, 0.0);
  }
}

TEST(Bench, SeriesBudgetRaisesTrialsWithinTheCap) {
  BenchConfig c;
  c.profiles = {CurveProfile::kAsymmetric159};
  c.ops = {BenchOp::kKeygen};
  c.min_attributes = 2;
  c.max_attributes = 2;
  c.min_series_seconds = 60;
  c.max_trials = 9;
  const auto rows = RunBench(c);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].trials, 9u);
  c.min_series_seconds = 1e-6;
  EXPECT_EQ(RunBench(c)[0].trials, 5u);
}

nlohmann::json BasicConfig() {
  return {{"profile", "MNT159"},
          {"seed", 3},
          {"slot_seconds", 1},
          {"devices",
           {{{"name", "sd1"}, {"attributes", {"firmware", "model-x"}}, {"mode", "pull"}},
            {{"name", "sd2"}, {"attributes", {"firmware"}}, {"mode", "push"}}}},
          {"messages", {{{"text", "first update"}, {"policy", "firmware and model-x"}}}}};
}

TEST(ScenarioConfig, ParsesAndRejects) {
  const auto c = ScenarioConfig::FromJson(BasicConfig());
  EXPECT_EQ(c.profile, CurveProfile::kAsymmetric159);
  EXPECT_EQ(c.devices.size(), 2u);
  EXPECT_EQ(c.devices[1].mode, nodes::DeliveryMode::kPush);
  EXPECT_EQ(c.max_latency_slots, 2u);
  EXPECT_EQ(ScenarioConfig::FromJson(c.ToJson()).ToJson(), c.ToJson());

  auto expect_error = [](nlohmann::json j, const std::string& needle) {
    try {
      ScenarioConfig::FromJson(j);
      ADD_FAILURE() << "accepted: " << j.dump();
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  auto j = BasicConfig();
  j["slot_seconds"] = 0;
  expect_error(j, "slot_seconds");
  j = BasicConfig();
  j["quorum"] = 2;
  expect_error(j, "quorum");
  j = BasicConfig();
  j["messages"][0]["policy"] = "firmware and";
  expect_error(j, "policy");
  j = BasicConfig();
  j["devices"][1]["name"] = "sd1";
  expect_error(j, "duplicate");
  j = BasicConfig();
  j["devices"][0]["attributes"] = nlohmann::json::array();
  expect_error(j, "no attributes");
  j = BasicConfig();
  j["fault"] = "meteor";
  expect_error(j, "fault");
  j = BasicConfig();
  j["expect"] = {{"sd9", {"accepted"}}};
  expect_error(j, "sd9");
  j = BasicConfig();
  j["expect"] = {{"sd1", {"accepted", "accepted"}}};
  expect_error(j, "one outcome per message");
  j = BasicConfig();
  j["seed"] = "seven";
  expect_error(j, "seed");
  expect_error(nlohmann::json::array(), "object");
}

TEST(ScenarioConfig, ExpectedOutcomeOracle) {
  const auto tree = policy::ParsePolicy("firmware and model-x");
  const policy::AttributeSet yes{"firmware", "model-x"}, no{"firmware"};
  EXPECT_EQ(ExpectedOutcome(tree, yes, ScenarioFault::kNone), "accepted");
  EXPECT_EQ(ExpectedOutcome(tree, no, ScenarioFault::kNone), "ignored");
  EXPECT_EQ(ExpectedOutcome(tree, yes, ScenarioFault::kTamperPayload), "alarm");
  EXPECT_EQ(ExpectedOutcome(tree, no, ScenarioFault::kTamperPayload), "ignored");
  EXPECT_EQ(ExpectedOutcome(tree, no, ScenarioFault::kCorruptPayload), "alarm");
  EXPECT_EQ(ParseScenarioFault("stale-replay"), ScenarioFault::kStaleReplay);
}

#ifdef SIGNCAST_CLI_PATH
// Same seed, same config: the device event logs agree in everything but
// wall-clock time.
TEST(Scenario, SameSeedGivesSameEvents) {
  const auto cfg = ScenarioConfig::FromJson(BasicConfig());
  const auto root = std::filesystem::temp_directory_path() / ("signcast_scenario_" + std::to_string(::getpid()));
  std::vector<std::vector<nlohmann::json>> runs;
  for (int run = 0; run < 2; ++run) {
    ScenarioOptions opts;
    opts.executable = SIGNCAST_CLI_PATH;
    opts.work_dir = root / ("run" + std::to_string(run));
    std::filesystem::remove_all(opts.work_dir);
    const auto report = RunScenario(cfg, opts);
    ASSERT_TRUE(report.ok) << report.divergence;
    std::vector<nlohmann::json> events;
    for (const char* dev : {"sd1", "sd2"}) {
      for (auto e : nodes::ReadEventLog(opts.work_dir / (std::string(dev) + ".events.jsonl"))) {
        auto j = e.ToJson();
        j.erase("time");
        events.push_back(j);
      }
    }
    runs.push_back(events);
  }
  ASSERT_EQ(runs[0].size(), 2u);
  EXPECT_EQ(runs[0], runs[1]);
  EXPECT_EQ(runs[0][0].at("event"), "accepted");
  EXPECT_EQ(runs[0][1].at("event"), "ignored");
}
#endif

}  // namespace
}  // namespace signcast::harness
