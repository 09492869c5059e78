#include "signcast/nodes/wire.hpp"

#include "signcast/detail/json_fields.hpp"

namespace signcast::nodes {

using detail::RequireBool;
using detail::RequireField;
using detail::RequireHex;
using detail::RequireString;
using detail::RequireU64;

namespace {

Digest256 DigestField(const nlohmann::json& j, std::string_view key) {
  const std::string hex = RequireString(j, key);
  if (hex.size() != 2 * Digest256::kSize) throw DecodeError("digest '" + std::string(key) + "' must be 64 hex chars");
  return Digest256::FromHex(hex);
}

}  // namespace

std::string BlockPath(std::uint64_t index) { return std::string(path::kBlock) + std::to_string(index); }
std::string PayloadPath(std::uint64_t index) { return BlockPath(index) + "/payload"; }
std::string HeadersPath(std::uint64_t from) { return std::string(path::kHeaders) + "?from=" + std::to_string(from); }

nlohmann::json SubmitResponse::ToJson() const {
  return {{"accepted", accepted}, {"reason", reason}, {"detail", detail}, {"payload_digest", payload_digest.ToHex()}};
}

SubmitResponse SubmitResponse::FromJson(const nlohmann::json& j) {
  SubmitResponse r;
  r.accepted = RequireBool(j, "accepted");
  r.reason = RequireString(j, "reason");
  r.detail = RequireString(j, "detail");
  r.payload_digest = DigestField(j, "payload_digest");
  return r;
}

nlohmann::json ApproveResponse::ToJson() const { return {{"approved", approved}, {"reason", reason}}; }

ApproveResponse ApproveResponse::FromJson(const nlohmann::json& j) {
  return {RequireBool(j, "approved"), RequireString(j, "reason")};
}

nlohmann::json ChainHead::ToJson() const { return {{"index", index}, {"hash", hash.ToHex()}}; }

ChainHead ChainHead::FromJson(const nlohmann::json& j) { return {RequireU64(j, "index"), DigestField(j, "hash")}; }

HeaderView HeaderView::Of(const ledger::Block& block) { return {block.header, block.payload_digest(), block.hash}; }

bool HeaderView::SelfConsistent() const { return hash == ledger::BlockHash(header, payload_digest); }

nlohmann::json HeaderView::ToJson() const {
  return {{"index", header.index},
          {"prev_hash", header.prev_hash.ToHex()},
          {"proposer", header.proposer.ToHex()},
          {"timestamp", header.timestamp},
          {"payload_digest", payload_digest.ToHex()},
          {"hash", hash.ToHex()}};
}

HeaderView HeaderView::FromJson(const nlohmann::json& j) {
  HeaderView v;
  v.header.index = RequireU64(j, "index");
  v.header.prev_hash = DigestField(j, "prev_hash");
  v.header.proposer = ledger::PseudoId::FromHex(RequireString(j, "proposer"));
  v.header.timestamp = RequireU64(j, "timestamp");
  v.payload_digest = DigestField(j, "payload_digest");
  v.hash = DigestField(j, "hash");
  return v;
}

PayloadView PayloadView::Of(const ledger::Block& block) {
  if (!block.record) throw NotFoundError("block " + std::to_string(block.header.index) + " carries no record");
  PayloadView v;
  v.index = block.header.index;
  v.publisher = block.record->pseudo_id;
  v.publisher_pk_digest = block.record->publisher_pk_digest;
  v.payload_digest = block.record->payload_digest;
  v.payload = block.record->Payload();
  return v;
}

nlohmann::json PayloadView::ToJson() const {
  return {{"index", index},
          {"publisher", publisher.ToHex()},
          {"publisher_pk_digest", publisher_pk_digest.ToHex()},
          {"payload_digest", payload_digest.ToHex()},
          {"payload", ToHex(payload)}};
}

PayloadView PayloadView::FromJson(const nlohmann::json& j) {
  PayloadView v;
  v.index = RequireU64(j, "index");
  v.publisher = ledger::PseudoId::FromHex(RequireString(j, "publisher"));
  v.publisher_pk_digest = DigestField(j, "publisher_pk_digest");
  v.payload_digest = DigestField(j, "payload_digest");
  v.payload = RequireHex(j, "payload");
  return v;
}

nlohmann::json PushMessage::ToJson() const {
  nlohmann::json j{{"header", header.ToJson()}};
  j["payload"] = payload ? payload->ToJson() : nlohmann::json(nullptr);
  return j;
}

PushMessage PushMessage::FromJson(const nlohmann::json& j) {
  PushMessage m;
  m.header = HeaderView::FromJson(RequireField(j, "header"));
  const auto& p = RequireField(j, "payload");
  if (!p.is_null()) m.payload = PayloadView::FromJson(p);
  return m;
}

}  // namespace signcast::nodes
