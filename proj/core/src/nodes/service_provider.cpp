#include "signcast/nodes/service_provider.hpp"

#include "signcast/policy/parser.hpp"

namespace signcast::nodes {

ServiceProvider::ServiceProvider(EntityCredentials creds) : creds_(std::move(creds)) {
  if (creds_.role != Role::kServiceProvider || !creds_.sign || !creds_.ver) {
    throw ArgumentError("service provider credentials need a signing pair");
  }
  pk_digest_ = absc::PublisherKeyDigest(creds_.pk, *creds_.ver);
}

ledger::Record ServiceProvider::MakeRecord(ByteSpan msg, std::string_view policy_text, Rng& rng) const {
  return MakeRecord(msg, policy::ParsePolicy(policy_text), rng);
}

ledger::Record ServiceProvider::MakeRecord(ByteSpan msg, const policy::AccessTree& policy, Rng& rng) const {
  auto out = absc::Signcrypt(creds_.pk, *creds_.sign, msg, policy, rng);
  return ledger::Record::Make(pk_digest_, creds_.pseudo_id, std::move(out.st), std::move(out.ct));
}

SubmitResponse ServiceProvider::Publish(const ledger::Record& record, const HttpClient& validator) const {
  try {
    return SubmitResponse::FromJson(validator.PostJson(path::kRecords, record.ToJson()));
  } catch (const HttpStatusError& e) {
    // A 400 still carries an explanation worth surfacing.
    SubmitResponse r;
    r.accepted = false;
    r.reason = "http-" + std::to_string(e.status());
    r.detail = e.body();
    r.payload_digest = record.payload_digest;
    return r;
  }
}

}  // namespace signcast::nodes
