#pragma once

// Service provider: signcrypts a message under an access policy and submits
// the resulting record to a validator.

#include <string_view>

#include "signcast/ledger/block.hpp"
#include "signcast/nodes/http_client.hpp"
#include "signcast/nodes/trusted_authority.hpp"
#include "signcast/nodes/wire.hpp"

namespace signcast::nodes {

class ServiceProvider {
 public:
  // Throws ArgumentError unless `creds` hold an SP signing pair.
  explicit ServiceProvider(EntityCredentials creds);

  const ledger::PseudoId& pseudo_id() const { return creds_.pseudo_id; }
  const absc::PublicParams& pk() const { return creds_.pk; }
  const Digest256& publisher_pk_digest() const { return pk_digest_; }

  // Parses `policy_text` first; a PolicyParseError leaves nothing built.
  ledger::Record MakeRecord(ByteSpan msg, std::string_view policy_text, Rng& rng) const;
  ledger::Record MakeRecord(ByteSpan msg, const policy::AccessTree& policy, Rng& rng) const;

  // POST /records. Rejections come back with the validator's reason
  // verbatim; transport failures throw NetworkError after retries.
  SubmitResponse Publish(const ledger::Record& record, const HttpClient& validator) const;

 private:
  EntityCredentials creds_;
  Digest256 pk_digest_;
};

}  // namespace signcast::nodes
