#include "signcast/ledger/chain.hpp"

#include <mutex>

#include "signcast/errors.hpp"

namespace signcast::ledger {

std::string_view ToString(RejectReason reason) {
  switch (reason) {
    case RejectReason::kNone: return "ok";
    case RejectReason::kUnregistered: return "unregistered";
    case RejectReason::kPublisherKey: return "pk-digest";
    case RejectReason::kDigest: return "digest";
    case RejectReason::kStructure: return "structure";
    case RejectReason::kGenesis: return "genesis";
    case RejectReason::kBadIndex: return "bad-index";
    case RejectReason::kPrevHash: return "prev-hash";
    case RejectReason::kHash: return "hash";
    case RejectReason::kStaleTimestamp: return "stale-timestamp";
    case RejectReason::kNotValidator: return "not-validator";
    case RejectReason::kNotLeader: return "not-leader";
    case RejectReason::kSlotOccupied: return "slot-occupied";
    case RejectReason::kMissingRecord: return "missing-record";
    case RejectReason::kQuorum: return "quorum";
    case RejectReason::kDecode: return "decode";
  }
  return "unknown";
}

Verdict ValidateRecord(const Record& record, const PublisherRegistry& registry) {
  const absc::VerificationKey* ver = registry.Find(record.pseudo_id);
  if (ver == nullptr) return Verdict::Reject(RejectReason::kUnregistered, record.pseudo_id.ToHex());
  if (record.publisher_pk_digest != absc::PublisherKeyDigest(registry.pk(), *ver)) {
    return Verdict::Reject(RejectReason::kPublisherKey, "publisher key digest does not match the registry");
  }
  if (record.payload_digest != record.ComputePayloadDigest()) {
    return Verdict::Reject(RejectReason::kDigest, "payload digest does not recompute");
  }
  const absc::SignedCiphertext& st = record.st;
  if (st.profile() != registry.pk().profile || st.w.profile() != st.profile() || st.psi.profile() != st.profile() ||
      st.pi.profile() != st.profile()) {
    return Verdict::Reject(RejectReason::kStructure, "ciphertext curve profile differs from the registry");
  }
  if (st.leaves.size() != st.tree.leaf_count()) {
    return Verdict::Reject(RejectReason::kStructure, "leaf components do not cover the policy");
  }
  if (st.c.IsIdentity() || st.w.IsIdentity() || st.psi.IsIdentity()) {
    return Verdict::Reject(RejectReason::kStructure, "identity element in C, w or psi");
  }
  for (const auto& leaf : st.leaves) {
    if (leaf.c_y.profile() != st.profile() || leaf.c_y_prime.profile() != st.profile()) {
      return Verdict::Reject(RejectReason::kStructure, "leaf component on the wrong curve");
    }
  }
  return Verdict::Ok();
}

Verdict CheckLink(const Block& parent, const Block& block, const ValidatorSet& vs, const PublisherRegistry& registry) {
  const BlockHeader& h = block.header;
  if (h.index != parent.header.index + 1) {
    return Verdict::Reject(RejectReason::kBadIndex,
                           "expected index " + std::to_string(parent.header.index + 1) + ", got " + std::to_string(h.index));
  }
  if (h.prev_hash != parent.hash) return Verdict::Reject(RejectReason::kPrevHash);
  if (block.hash != block.ComputeHash()) return Verdict::Reject(RejectReason::kHash);
  if (h.timestamp <= parent.header.timestamp) return Verdict::Reject(RejectReason::kStaleTimestamp);
  if (!vs.Contains(h.proposer)) return Verdict::Reject(RejectReason::kNotValidator, h.proposer.ToHex());
  if (vs.LeaderAt(h.timestamp) != h.proposer) {
    return Verdict::Reject(RejectReason::kNotLeader, h.proposer.ToHex() + " does not lead slot " +
                                                         std::to_string(vs.SlotOf(h.timestamp)));
  }
  if (parent.header.index > 0 && vs.SlotOf(h.timestamp) == vs.SlotOf(parent.header.timestamp)) {
    return Verdict::Reject(RejectReason::kSlotOccupied, "slot " + std::to_string(vs.SlotOf(h.timestamp)));
  }
  if (!block.record) return Verdict::Reject(RejectReason::kMissingRecord);
  return ValidateRecord(*block.record, registry);
}

Block ProposeBlock(const Block& tip, Record record, const PseudoId& proposer, std::uint64_t now) {
  Block b;
  b.header.index = tip.header.index + 1;
  b.header.prev_hash = tip.hash;
  b.header.proposer = proposer;
  b.header.timestamp = now;
  b.record = std::move(record);
  b.Seal();
  return b;
}

ChainVerdict VerifyChain(const std::vector<Block>& blocks, const ValidatorSet& vs, const PublisherRegistry& registry,
                         const Digest256& anchor) {
  if (blocks.empty() || !(blocks.front() == Genesis(anchor))) {
    return {Verdict::Reject(RejectReason::kGenesis, "first block is not the expected genesis"), 0};
  }
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    Verdict v = CheckLink(blocks[i - 1], blocks[i], vs, registry);
    if (!v.ok()) return {std::move(v), i};
  }
  return {};
}

Chain::Chain(const Digest256& anchor) : anchor_(anchor) { blocks_.push_back(Genesis(anchor)); }

Chain Chain::FromVerified(std::vector<Block> blocks, const Digest256& anchor) {
  if (blocks.empty() || !(blocks.front() == Genesis(anchor))) throw ArgumentError("chain must start at its genesis");
  Chain c(anchor);
  c.blocks_ = std::move(blocks);
  return c;
}

Chain::Chain(const Chain& other) {
  std::shared_lock lock(other.mu_);
  anchor_ = other.anchor_;
  blocks_ = other.blocks_;
}

Chain& Chain::operator=(const Chain& other) {
  if (this == &other) return *this;
  std::vector<Block> copy;
  Digest256 anchor;
  {
    std::shared_lock lock(other.mu_);
    copy = other.blocks_;
    anchor = other.anchor_;
  }
  std::unique_lock lock(mu_);
  blocks_ = std::move(copy);
  anchor_ = anchor;
  return *this;
}

std::size_t Chain::size() const {
  std::shared_lock lock(mu_);
  return blocks_.size();
}

Block Chain::Tip() const {
  std::shared_lock lock(mu_);
  return blocks_.back();
}

Block Chain::At(std::size_t index) const {
  std::shared_lock lock(mu_);
  if (index >= blocks_.size()) throw NotFoundError("no block at index " + std::to_string(index));
  return blocks_[index];
}

std::vector<Block> Chain::Blocks(std::size_t from) const {
  std::shared_lock lock(mu_);
  if (from >= blocks_.size()) return {};
  return {blocks_.begin() + static_cast<std::ptrdiff_t>(from), blocks_.end()};
}

Verdict Chain::Append(const Block& block, const ValidatorSet& vs, const PublisherRegistry& registry,
                      std::size_t approvals) {
  std::unique_lock lock(mu_);
  Verdict v = CheckLink(blocks_.back(), block, vs, registry);
  if (!v.ok()) return v;
  if (approvals < vs.quorum()) {
    return Verdict::Reject(RejectReason::kQuorum, std::to_string(approvals) + " of " + std::to_string(vs.quorum()));
  }
  blocks_.push_back(block);
  return v;
}

Chain Chain::Checkpoint() const { return Chain(Tip().hash); }

}  // namespace signcast::ledger
