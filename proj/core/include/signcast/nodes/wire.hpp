#pragma once

// JSON-over-HTTP protocol between the roles. All binary fields are hex;
// pseudo identities are 32 hex chars. No message carries a real identity.
//
//   validator:  POST /records            SubmitRecord -> SubmitResponse
//               POST /blocks/approve     {block}      -> ApproveResponse
//               POST /blocks             {block, approvals} -> SubmitResponse
//   validator and ED:
//               GET  /chain/head                      -> ChainHead
//               GET  /chain/headers?from=N            -> {headers: [HeaderView]}
//               GET  /chain/block/N                   -> Block JSON
//               GET  /chain/block/N/payload           -> PayloadView
//   ED:         POST /subscribe          {url, mode}  -> {subscribed}
//   device:     POST /push               PushMessage  -> {status, reason}

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "signcast/ledger/block.hpp"

namespace signcast::nodes {

namespace path {
inline constexpr const char* kRecords = "/records";
inline constexpr const char* kApprove = "/blocks/approve";
inline constexpr const char* kBlocks = "/blocks";
inline constexpr const char* kHead = "/chain/head";
inline constexpr const char* kHeaders = "/chain/headers";
inline constexpr const char* kBlock = "/chain/block/";
inline constexpr const char* kPush = "/push";
inline constexpr const char* kSubscribe = "/subscribe";
}  // namespace path

std::string BlockPath(std::uint64_t index);
std::string PayloadPath(std::uint64_t index);
std::string HeadersPath(std::uint64_t from);

struct SubmitResponse {
  bool accepted = false;
  std::string reason;  // reject reason name, verbatim from the validator
  std::string detail;
  Digest256 payload_digest;

  nlohmann::json ToJson() const;
  static SubmitResponse FromJson(const nlohmann::json& j);
};

struct ApproveResponse {
  bool approved = false;
  std::string reason;

  nlohmann::json ToJson() const;
  static ApproveResponse FromJson(const nlohmann::json& j);
};

struct ChainHead {
  std::uint64_t index = 0;
  Digest256 hash;

  nlohmann::json ToJson() const;
  static ChainHead FromJson(const nlohmann::json& j);
};

// Block header as served to devices.
struct HeaderView {
  ledger::BlockHeader header;
  Digest256 payload_digest;
  Digest256 hash;

  static HeaderView Of(const ledger::Block& block);
  // hash == BlockHash(header, payload_digest)
  bool SelfConsistent() const;
  nlohmann::json ToJson() const;
  static HeaderView FromJson(const nlohmann::json& j);

  friend bool operator==(const HeaderView&, const HeaderView&) = default;
};

// Record body for one block: publisher fields plus the ST || CT bytes.
struct PayloadView {
  std::uint64_t index = 0;
  ledger::PseudoId publisher;
  Digest256 publisher_pk_digest;
  Digest256 payload_digest;
  Bytes payload;

  static PayloadView Of(const ledger::Block& block);
  nlohmann::json ToJson() const;
  static PayloadView FromJson(const nlohmann::json& j);
};

struct PushMessage {
  HeaderView header;
  std::optional<PayloadView> payload;  // present in push mode

  nlohmann::json ToJson() const;
  static PushMessage FromJson(const nlohmann::json& j);
};

}  // namespace signcast::nodes
