#pragma once

// PoA validator node. Accepts records into a mempool, proposes one block per
// slot when it is the round-robin leader, collects peer approvals and
// broadcasts committed blocks. Serves the chain to edge devices.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "signcast/ledger/chain.hpp"
#include "signcast/nodes/http_client.hpp"
#include "signcast/nodes/trusted_authority.hpp"
#include "signcast/nodes/wire.hpp"

namespace signcast::nodes {

struct ValidatorOptions {
  std::string host = "127.0.0.1";
  int port = 0;                          // 0 binds any free port
  std::filesystem::path chain_file;      // empty keeps the chain in memory
  std::vector<std::string> peers;        // other validators' base URLs
  int tick_ms = 200;
  RetryPolicy peer_retry{2, 50, 200};
  std::size_t max_headers_per_request = 512;
};

class ValidatorNode {
 public:
  // `creds` must belong to a member of `vs`. An existing chain file is
  // loaded and fully verified; a failure throws ConfigError.
  ValidatorNode(EntityCredentials creds, ledger::ValidatorSet vs, ledger::PublisherRegistry registry,
                ValidatorOptions options = {}, std::shared_ptr<const ledger::Clock> clock = nullptr);
  ~ValidatorNode();
  ValidatorNode(const ValidatorNode&) = delete;
  ValidatorNode& operator=(const ValidatorNode&) = delete;

  // Starts the HTTP server and, if requested, the slot loop. Returns the
  // bound port.
  int Start(bool run_slot_loop = true);
  void Stop();
  int port() const;
  std::string url() const;

  const ledger::PseudoId& id() const;
  ledger::Chain chain() const;
  std::size_t mempool_size() const;

  // One slot step: proposes a block if this node leads the current slot, no
  // block exists in it yet and the mempool is not empty.
  std::optional<ledger::Block> Tick();

  SubmitResponse Submit(const ledger::Record& record, bool relay = true);
  ApproveResponse Approve(const ledger::Block& block) const;
  // Commit a peer's block that gathered `approvals` approvals.
  SubmitResponse Accept(const ledger::Block& block, std::size_t approvals);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace signcast::nodes
