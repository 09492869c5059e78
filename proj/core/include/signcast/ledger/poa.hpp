#pragma once

// Proof-of-Authority scheduling: fixed validator set, round-robin leaders in
// timed slots, one block per slot.

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "signcast/absc/scheme.hpp"
#include "signcast/ledger/block.hpp"

namespace signcast::ledger {

// Wall clock in unix seconds; injectable so slot logic is testable.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::uint64_t Now() const = 0;
};

class SystemClock final : public Clock {
 public:
  std::uint64_t Now() const override;
};

class ManualClock final : public Clock {
 public:
  explicit ManualClock(std::uint64_t start = 0) : now_(start) {}
  std::uint64_t Now() const override { return now_.load(); }
  void Set(std::uint64_t t) { now_.store(t); }
  void Advance(std::uint64_t dt) { now_.fetch_add(dt); }

 private:
  std::atomic<std::uint64_t> now_;
};

struct Validator {
  PseudoId id;
  absc::VerificationKey key_ver;
};

class ValidatorSet {
 public:
  // Throws ConfigError for an empty set, duplicate ids, quorum outside
  // 1..count or slot_seconds == 0.
  ValidatorSet(std::vector<Validator> validators, std::size_t quorum, std::uint64_t slot_seconds);

  // Sorted by pseudo identity.
  const std::vector<Validator>& validators() const { return validators_; }
  std::size_t quorum() const { return quorum_; }
  std::uint64_t slot_seconds() const { return slot_seconds_; }
  bool Contains(const PseudoId& id) const;

  std::uint64_t SlotOf(std::uint64_t unix_seconds) const { return unix_seconds / slot_seconds_; }
  const PseudoId& LeaderForSlot(std::uint64_t slot) const;
  const PseudoId& LeaderAt(std::uint64_t unix_seconds) const { return LeaderForSlot(SlotOf(unix_seconds)); }
  // First second of the next slot at or after `after` led by `id`, if `id`
  // is a validator.
  std::optional<std::uint64_t> NextSlotStartFor(const PseudoId& id, std::uint64_t after) const;

  nlohmann::json ToJson() const;
  static ValidatorSet FromJson(const nlohmann::json& j, const absc::GroupContext& ctx);

 private:
  std::vector<Validator> validators_;
  std::size_t quorum_;
  std::uint64_t slot_seconds_;
};

// leader = sorted(ids)[slot mod count]. Throws ConfigError for an empty list.
PseudoId LeaderForSlot(std::uint64_t slot, std::vector<PseudoId> ids);

// Public registry of publishers: pseudo identity -> verification key, plus
// the public parameters every key belongs to.
class PublisherRegistry {
 public:
  PublisherRegistry() = default;
  explicit PublisherRegistry(absc::PublicParams pk) : pk_(std::move(pk)) {}

  const absc::PublicParams& pk() const { return pk_; }
  void Register(const PseudoId& id, absc::VerificationKey key_ver);
  const absc::VerificationKey* Find(const PseudoId& id) const;
  const std::map<PseudoId, absc::VerificationKey>& entries() const { return entries_; }

  nlohmann::json ToJson() const;
  static PublisherRegistry FromJson(const nlohmann::json& j);

 private:
  absc::PublicParams pk_;
  std::map<PseudoId, absc::VerificationKey> entries_;
};

}  // namespace signcast::ledger
