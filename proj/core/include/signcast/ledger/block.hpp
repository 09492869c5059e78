#pragma once

// Ledger records and blocks.
//
// block_hash = SHA-256(index u64 | prev_hash | proposer | timestamp u64 |
// payload_digest); the genesis block has no record and hashes 32 zero bytes
// in the payload_digest position. Each block also stores its own hash so a
// corrupted block is reported at its own index rather than its successor's.

#include <nlohmann/json.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "signcast/absc/scheme.hpp"
#include "signcast/crypto/bytes.hpp"
#include "signcast/crypto/hash.hpp"
#include "signcast/crypto/rng.hpp"

namespace signcast::ledger {

// TA-issued pseudo identity: 16 bytes, written as 32 lowercase hex chars.
struct PseudoId {
  static constexpr std::size_t kSize = 16;
  std::array<std::uint8_t, kSize> bytes{};

  std::string ToHex() const;
  // Throws DecodeError unless `hex` is exactly 32 lowercase hex characters.
  static PseudoId FromHex(std::string_view hex);
  static PseudoId Random(Rng& rng);
  bool IsZero() const;

  auto operator<=>(const PseudoId&) const = default;
};

struct Record {
  Digest256 publisher_pk_digest;
  PseudoId pseudo_id;
  Digest256 payload_digest;  // SHA-256 over the encoded ST || CT
  absc::SignedCiphertext st;
  absc::MessageCiphertext ct;

  static Record Make(const Digest256& publisher_pk_digest, const PseudoId& pseudo_id, absc::SignedCiphertext st,
                     absc::MessageCiphertext ct);

  Bytes Payload() const;
  Digest256 ComputePayloadDigest() const;

  void EncodeTo(ByteWriter& w) const;
  static Record Decode(ByteReader& r);
  nlohmann::json ToJson() const;
  static Record FromJson(const nlohmann::json& j);

  friend bool operator==(const Record&, const Record&) = default;
};

struct BlockHeader {
  std::uint64_t index = 0;
  Digest256 prev_hash;
  PseudoId proposer;
  std::uint64_t timestamp = 0;  // unix seconds

  friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

struct Block {
  BlockHeader header;
  std::optional<Record> record;  // absent only in genesis blocks
  Digest256 hash;                // as stored; ComputeHash() is authoritative

  Digest256 payload_digest() const { return record ? record->payload_digest : Digest256{}; }
  Digest256 ComputeHash() const;
  // Sets `hash` from the current contents.
  void Seal() { hash = ComputeHash(); }

  Bytes Encode() const;
  void EncodeTo(ByteWriter& w) const;
  static Block Decode(ByteSpan bytes);
  static Block Decode(ByteReader& r);
  // Header-only form served to devices: every field except the record body.
  nlohmann::json HeaderJson() const;
  nlohmann::json ToJson() const;
  static Block FromJson(const nlohmann::json& j);

  friend bool operator==(const Block&, const Block&) = default;
};

Digest256 BlockHash(const BlockHeader& header, const Digest256& payload_digest);
inline Digest256 BlockHash(const Block& block) { return block.ComputeHash(); }

// Index 0, zero proposer, timestamp 0, no record. `anchor` is the previous
// hash: zero for a fresh chain, the old tip hash after a checkpoint.
Block Genesis(const Digest256& anchor = Digest256{});

}  // namespace signcast::ledger
