#pragma once

// Hash-chained block list with PoA append rules and whole-chain
// verification.

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "signcast/ledger/block.hpp"
#include "signcast/ledger/poa.hpp"

namespace signcast::ledger {

enum class RejectReason {
  kNone,
  kUnregistered,    // publisher pseudo identity unknown
  kPublisherKey,    // publisher_pk_digest does not match the registry
  kDigest,          // payload_digest does not recompute
  kStructure,       // ciphertext components malformed
  kGenesis,         // first block is not the expected genesis
  kBadIndex,
  kPrevHash,
  kHash,            // stored block hash does not recompute
  kStaleTimestamp,  // timestamp not after the parent's
  kNotValidator,
  kNotLeader,
  kSlotOccupied,
  kMissingRecord,
  kQuorum,
  kDecode,          // block bytes could not be decoded
};

std::string_view ToString(RejectReason reason);

struct Verdict {
  RejectReason reason = RejectReason::kNone;
  std::string detail;

  bool ok() const { return reason == RejectReason::kNone; }
  static Verdict Ok() { return {}; }
  static Verdict Reject(RejectReason r, std::string detail = {}) { return {r, std::move(detail)}; }
};

struct ChainVerdict {
  Verdict verdict;
  std::size_t first_bad_index = 0;

  bool ok() const { return verdict.ok(); }
};

// Checks (a) registration, (b) publisher key digest, (c) payload digest,
// (d) ciphertext structure. Full signature verification needs attribute
// keys and happens at the device.
Verdict ValidateRecord(const Record& record, const PublisherRegistry& registry);

// Header and record checks for `block` directly after `parent`.
Verdict CheckLink(const Block& parent, const Block& block, const ValidatorSet& vs, const PublisherRegistry& registry);

// Block carrying `record` after `tip`, stamped `now`, sealed.
Block ProposeBlock(const Block& tip, Record record, const PseudoId& proposer, std::uint64_t now);

// First violation, or ok. Block 0 must equal Genesis(anchor) exactly.
ChainVerdict VerifyChain(const std::vector<Block>& blocks, const ValidatorSet& vs, const PublisherRegistry& registry,
                         const Digest256& anchor = Digest256{});

// Append-only chain. One writer, many readers; every accessor returns a
// consistent snapshot.
class Chain {
 public:
  explicit Chain(const Digest256& anchor = Digest256{});
  // Adopts blocks already verified by the caller.
  static Chain FromVerified(std::vector<Block> blocks, const Digest256& anchor);

  Chain(const Chain& other);
  Chain& operator=(const Chain& other);

  const Digest256& anchor() const { return anchor_; }
  std::size_t size() const;
  Block Tip() const;
  Block At(std::size_t index) const;  // throws NotFoundError
  std::vector<Block> Blocks(std::size_t from = 0) const;

  // Validates against the tip and appends; `approvals` counts off-chain
  // validator approvals and must reach the quorum.
  Verdict Append(const Block& block, const ValidatorSet& vs, const PublisherRegistry& registry,
                 std::size_t approvals);

  // New chain whose genesis embeds this chain's tip hash.
  Chain Checkpoint() const;

 private:
  Digest256 anchor_;
  mutable std::shared_mutex mu_;
  std::vector<Block> blocks_;
};

}  // namespace signcast::ledger
