#include "signcast/ledger/block.hpp"

#include <algorithm>

#include "signcast/absc/codec.hpp"
#include "signcast/detail/json_fields.hpp"
#include "signcast/errors.hpp"

namespace signcast::ledger {
namespace {

constexpr std::size_t kMaxPayload = std::size_t{1} << 30;

using detail::RequireField;
using detail::RequireString;
using detail::RequireU64;

Digest256 DigestFromJson(const nlohmann::json& j, std::string_view key) {
  const std::string hex = RequireString(j, key);
  if (hex.size() != 2 * Digest256::kSize) throw DecodeError("digest '" + std::string(key) + "' must be 64 hex chars");
  return Digest256::FromHex(hex);
}

}  // namespace

std::string PseudoId::ToHex() const { return signcast::ToHex(bytes); }

PseudoId PseudoId::FromHex(std::string_view hex) {
  if (hex.size() != 2 * kSize) throw DecodeError("pseudo identity must be 32 hex chars");
  if (!std::all_of(hex.begin(), hex.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); })) {
    throw DecodeError("pseudo identity must be lowercase hex");
  }
  Bytes raw = signcast::FromHex(hex);
  PseudoId id;
  std::copy(raw.begin(), raw.end(), id.bytes.begin());
  return id;
}

PseudoId PseudoId::Random(Rng& rng) {
  PseudoId id;
  do {
    rng.Fill(id.bytes);
  } while (id.IsZero());
  return id;
}

bool PseudoId::IsZero() const {
  return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

// ---------------------------------------------------------------- Record

Record Record::Make(const Digest256& publisher_pk_digest, const PseudoId& pseudo_id, absc::SignedCiphertext st,
                    absc::MessageCiphertext ct) {
  Record r;
  r.publisher_pk_digest = publisher_pk_digest;
  r.pseudo_id = pseudo_id;
  r.st = std::move(st);
  r.ct = std::move(ct);
  r.payload_digest = r.ComputePayloadDigest();
  return r;
}

Bytes Record::Payload() const { return absc::EncodePayload(st, ct); }

Digest256 Record::ComputePayloadDigest() const { return Sha256(Payload()); }

void Record::EncodeTo(ByteWriter& w) const {
  w.PutRaw(publisher_pk_digest.span());
  w.PutRaw(pseudo_id.bytes);
  w.PutRaw(payload_digest.span());
  w.PutBlob(Payload());
}

Record Record::Decode(ByteReader& r) {
  Record rec;
  rec.publisher_pk_digest = Digest256::FromSpan(r.GetRaw(Digest256::kSize));
  ByteSpan id = r.GetRaw(PseudoId::kSize);
  std::copy(id.begin(), id.end(), rec.pseudo_id.bytes.begin());
  rec.payload_digest = Digest256::FromSpan(r.GetRaw(Digest256::kSize));
  auto [st, ct] = absc::DecodePayload(r.GetBlob(kMaxPayload));
  rec.st = std::move(st);
  rec.ct = std::move(ct);
  return rec;
}

nlohmann::json Record::ToJson() const {
  return {{"publisher_pk_digest", publisher_pk_digest.ToHex()},
          {"pseudo_id", pseudo_id.ToHex()},
          {"payload_digest", payload_digest.ToHex()},
          {"st", absc::SignedCiphertextToJson(st)},
          {"ct", ct.ToJson()}};
}

Record Record::FromJson(const nlohmann::json& j) {
  Record rec;
  rec.publisher_pk_digest = DigestFromJson(j, "publisher_pk_digest");
  rec.pseudo_id = PseudoId::FromHex(RequireString(j, "pseudo_id"));
  rec.payload_digest = DigestFromJson(j, "payload_digest");
  rec.st = absc::SignedCiphertextFromJson(RequireField(j, "st"));
  rec.ct = absc::MessageCiphertext::FromJson(RequireField(j, "ct"));
  return rec;
}

// ---------------------------------------------------------------- Block

Digest256 BlockHash(const BlockHeader& header, const Digest256& payload_digest) {
  ByteWriter w;
  w.PutU64(header.index);
  w.PutRaw(header.prev_hash.span());
  w.PutRaw(header.proposer.bytes);
  w.PutU64(header.timestamp);
  w.PutRaw(payload_digest.span());
  return Sha256(w.bytes());
}

Digest256 Block::ComputeHash() const { return BlockHash(header, payload_digest()); }

void Block::EncodeTo(ByteWriter& w) const {
  w.PutU64(header.index);
  w.PutRaw(header.prev_hash.span());
  w.PutRaw(header.proposer.bytes);
  w.PutU64(header.timestamp);
  w.PutRaw(hash.span());
  w.PutU8(record ? 1 : 0);
  if (record) record->EncodeTo(w);
}

Bytes Block::Encode() const {
  ByteWriter w;
  EncodeTo(w);
  return std::move(w).Take();
}

Block Block::Decode(ByteReader& r) {
  Block b;
  b.header.index = r.GetU64();
  b.header.prev_hash = Digest256::FromSpan(r.GetRaw(Digest256::kSize));
  ByteSpan id = r.GetRaw(PseudoId::kSize);
  std::copy(id.begin(), id.end(), b.header.proposer.bytes.begin());
  b.header.timestamp = r.GetU64();
  b.hash = Digest256::FromSpan(r.GetRaw(Digest256::kSize));
  const std::uint8_t has_record = r.GetU8();
  if (has_record > 1) throw DecodeError("invalid record flag");
  if (has_record) b.record = Record::Decode(r);
  return b;
}

Block Block::Decode(ByteSpan bytes) {
  ByteReader r(bytes);
  Block b = Decode(r);
  r.ExpectEnd();
  return b;
}

nlohmann::json Block::HeaderJson() const {
  return {{"index", header.index},
          {"prev_hash", header.prev_hash.ToHex()},
          {"proposer", header.proposer.ToHex()},
          {"timestamp", header.timestamp},
          {"payload_digest", payload_digest().ToHex()},
          {"hash", hash.ToHex()}};
}

nlohmann::json Block::ToJson() const {
  nlohmann::json j = HeaderJson();
  j["record"] = record ? record->ToJson() : nlohmann::json(nullptr);
  return j;
}

Block Block::FromJson(const nlohmann::json& j) {
  Block b;
  b.header.index = RequireU64(j, "index");
  b.header.prev_hash = DigestFromJson(j, "prev_hash");
  b.header.proposer = PseudoId::FromHex(RequireString(j, "proposer"));
  b.header.timestamp = RequireU64(j, "timestamp");
  b.hash = DigestFromJson(j, "hash");
  const auto& rec = RequireField(j, "record");
  if (!rec.is_null()) b.record = Record::FromJson(rec);
  if (DigestFromJson(j, "payload_digest") != b.payload_digest()) {
    throw DecodeError("block payload_digest disagrees with its record");
  }
  return b;
}

Block Genesis(const Digest256& anchor) {
  Block g;
  g.header.index = 0;
  g.header.prev_hash = anchor;
  g.header.timestamp = 0;
  g.Seal();
  return g;
}

}  // namespace signcast::ledger
