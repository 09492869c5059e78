#pragma once

// Edge device: follows a validator, verifies every block link before
// caching it, forwards new records to subscribed smart devices and serves
// cached payloads. Cache entries are re-verified against the verified hash
// list on every read and refetched on mismatch.

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "signcast/ledger/chain.hpp"
#include "signcast/nodes/http_client.hpp"
#include "signcast/nodes/wire.hpp"

namespace signcast::nodes {

// Pull: devices receive headers and fetch payloads themselves.
// Push: devices receive header and payload together.
enum class DeliveryMode { kPull, kPush };

std::string_view ToString(DeliveryMode mode);
DeliveryMode ParseDeliveryMode(std::string_view text);  // "pull" | "push"

// Misbehaviour for exercising device-side checks.
//   tamper-payload   flip a ciphertext body byte and rewrite payload_digest
//                    and hash so the header stays self-consistent
//   corrupt-payload  flip a ciphertext body byte, header untouched
enum class EdgeFault { kNone, kTamperPayload, kCorruptPayload };

std::string_view ToString(EdgeFault fault);
EdgeFault ParseEdgeFault(std::string_view text);  // "none" | "tamper-payload" | "corrupt-payload"

struct DeviceTarget {
  std::string url;
  DeliveryMode mode = DeliveryMode::kPull;
};

struct EdgeOptions {
  std::string host = "127.0.0.1";
  int port = 0;
  std::string validator_url;
  Digest256 anchor;  // genesis anchor of the followed chain
  std::vector<DeviceTarget> devices;
  int poll_ms = 200;
  EdgeFault fault = EdgeFault::kNone;
  RetryPolicy retry{3, 100, 1000};
};

struct CacheEntry {
  std::uint64_t index = 0;
  HeaderView header;
  std::optional<PayloadView> payload;  // absent for genesis
  std::chrono::system_clock::time_point fetched_at;
};

class EdgeNode {
 public:
  EdgeNode(ledger::ValidatorSet vs, ledger::PublisherRegistry registry, EdgeOptions options);
  ~EdgeNode();
  EdgeNode(const EdgeNode&) = delete;
  EdgeNode& operator=(const EdgeNode&) = delete;

  int Start(bool run_sync_loop = true);
  void Stop();
  int port() const;
  std::string url() const;

  void Subscribe(DeviceTarget device);

  // Fetches and verifies blocks past the last verified one, then pushes the
  // new records. Stops at the first block that fails its link check and
  // retries from there on the next call. Returns the number of new record blocks.
  std::size_t SyncOnce();

  std::size_t verified_size() const;
  std::optional<ledger::Verdict> last_rejection() const;
  std::uint64_t refetch_count() const;

  // Cached, re-verified view as served (fault applied). Throws NotFoundError.
  HeaderView ServeHeader(std::uint64_t index);
  PayloadView ServePayload(std::uint64_t index);

  // Test hook: flips one payload byte of a cached entry in place.
  void CorruptCacheEntry(std::uint64_t index);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace signcast::nodes
