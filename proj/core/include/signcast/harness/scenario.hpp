#pragma once

// Multi-process local deployment driven by a JSON config: TA setup and
// registrations, validators (each run by an SP), one edge device and any
// number of smart devices, all as child processes of the signcast CLI.
// Messages are published one at a time; each device's outcome is checked
// against the access-tree oracle and the publish-to-event latency against a
// slot bound.
//
// Config (all keys optional except devices and messages):
//   {
//     "profile": "SS512" | "MNT159",
//     "seed": 1,
//     "slot_seconds": 1,
//     "freshness_slots": 10,
//     "validators": 1,
//     "quorum": <validators>,
//     "base_port": 0,              // 0: pick free ports
//     "fault": "none" | "tamper-payload" | "corrupt-payload" | "stale-replay",
//     "max_latency_slots": 2,
//     "tick_ms": 100,
//     "devices": [{"name": "sd1", "attributes": ["a", "b"], "mode": "pull"}],
//     "messages": [{"text": "...", "policy": "a and b"}],
//     "expect": {"sd1": ["accepted"]}   // overrides the oracle per message
//   }

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "signcast/crypto/group.hpp"
#include "signcast/nodes/edge_device.hpp"
#include "signcast/policy/access_tree.hpp"

namespace signcast::harness {

enum class ScenarioFault { kNone, kTamperPayload, kCorruptPayload, kStaleReplay };

std::string_view ToString(ScenarioFault fault);
ScenarioFault ParseScenarioFault(std::string_view text);  // throws ConfigError

struct ScenarioDevice {
  std::string name;
  std::vector<std::string> attributes;
  nodes::DeliveryMode mode = nodes::DeliveryMode::kPull;
};

struct ScenarioMessage {
  std::string text;
  std::string policy;
};

struct ScenarioConfig {
  crypto::CurveProfile profile = crypto::CurveProfile::kSymmetric512;
  std::uint64_t seed = 1;
  std::uint64_t slot_seconds = 1;
  std::uint64_t freshness_slots = 10;
  std::size_t validators = 1;
  std::size_t quorum = 0;  // 0: all validators
  int base_port = 0;
  ScenarioFault fault = ScenarioFault::kNone;
  std::uint64_t max_latency_slots = 2;
  int tick_ms = 100;
  std::vector<ScenarioDevice> devices;
  std::vector<ScenarioMessage> messages;
  std::map<std::string, std::vector<std::string>> expect;

  // Throws ConfigError with the offending key.
  static ScenarioConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

// accepted | ignored | alarm, from policy satisfaction and the fault.
std::string ExpectedOutcome(const policy::AccessTree& tree, const policy::AttributeSet& attrs, ScenarioFault fault);

struct ScenarioOutcome {
  std::string device;
  std::string message;  // message number, or "replay"
  std::string expected;
  std::string observed;
  std::string reason;
  double latency_seconds = 0;
};

struct ScenarioReport {
  bool ok = false;
  std::string divergence;  // first mismatch, empty when ok
  std::vector<ScenarioOutcome> outcomes;
  std::filesystem::path work_dir;

  nlohmann::json ToJson() const;
};

struct ScenarioOptions {
  std::filesystem::path executable;  // the signcast CLI
  std::filesystem::path work_dir;    // empty: fresh directory under the temp dir
  double startup_timeout_seconds = 30;
};

ScenarioReport RunScenario(const ScenarioConfig& config, const ScenarioOptions& options);

}  // namespace signcast::harness
