#pragma once

// Smart device: receives pushed headers (and payloads in push mode) from an
// edge device, checks freshness and integrity, and designcrypts records
// whose policy its attributes satisfy.
//
// Each delivery produces one event, appended as a JSON line to the event
// log: {event, index, payload_digest, message_digest, device, time, reason}
// with event one of accepted | ignored | alarm | stale | duplicate.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "signcast/ledger/poa.hpp"
#include "signcast/nodes/edge_device.hpp"
#include "signcast/nodes/http_client.hpp"
#include "signcast/nodes/trusted_authority.hpp"
#include "signcast/nodes/wire.hpp"

namespace signcast::nodes {

inline constexpr std::uint64_t kDefaultFreshnessSlots = 10;

struct DeviceOptions {
  std::string host = "127.0.0.1";
  int port = 0;
  std::string edge_url;                 // payload source in pull mode
  bool subscribe = true;                // register with the edge device on Start
  DeliveryMode mode = DeliveryMode::kPull;
  std::filesystem::path event_log;      // empty: in memory only
  std::uint64_t freshness_slots = kDefaultFreshnessSlots;
  RetryPolicy retry{3, 100, 1000};
};

struct DeviceEvent {
  std::string event;
  std::uint64_t index = 0;
  Digest256 payload_digest;
  std::optional<Digest256> message_digest;  // SHA-256 of the plaintext, accepted only
  std::string device;                       // pseudo identity
  std::uint64_t time = 0;
  std::string reason;

  nlohmann::json ToJson() const;
  static DeviceEvent FromJson(const nlohmann::json& j);
};

std::vector<DeviceEvent> ReadEventLog(const std::filesystem::path& file);

class SmartDevice {
 public:
  // Throws ArgumentError unless `creds` hold an attribute key.
  SmartDevice(EntityCredentials creds, ledger::PublisherRegistry registry, ledger::ValidatorSet vs,
              DeviceOptions options = {}, std::shared_ptr<const ledger::Clock> clock = nullptr);
  ~SmartDevice();
  SmartDevice(const SmartDevice&) = delete;
  SmartDevice& operator=(const SmartDevice&) = delete;

  int Start();
  void Stop();
  int port() const;
  std::string url() const;
  const ledger::PseudoId& id() const;

  DeviceEvent Handle(const PushMessage& message);

  std::vector<DeviceEvent> events() const;
  // Plaintexts of accepted records, by block index.
  std::optional<Bytes> Delivered(std::uint64_t index) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace signcast::nodes
