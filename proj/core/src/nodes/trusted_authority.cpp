#include "signcast/nodes/trusted_authority.hpp"

#include <fstream>
#include <sstream>

#include "signcast/detail/json_fields.hpp"
#include "signcast/errors.hpp"

namespace signcast::nodes {

using detail::RequireArray;
using detail::RequireBool;
using detail::RequireField;
using detail::RequireString;
using detail::RequireU64;

namespace {

constexpr const char* kStateFile = "ta_state.json";
constexpr const char* kParamsFile = "params.json";
constexpr const char* kRegistryFile = "registry.json";
constexpr const char* kValidatorsFile = "validators.json";

nlohmann::json AttributesJson(const policy::AttributeSet& attrs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& s : attrs) a.push_back(s);
  return a;
}

policy::AttributeSet AttributesFromJson(const nlohmann::json& a) {
  std::vector<std::string> raw;
  for (const auto& s : a) {
    if (!s.is_string()) throw DecodeError("attribute must be a string");
    raw.push_back(s.get<std::string>());
  }
  try {
    return policy::MakeAttributeSet(raw);
  } catch (const ArgumentError& e) {
    throw DecodeError(e.what());
  }
}

}  // namespace

std::string_view ToString(Role role) {
  switch (role) {
    case Role::kServiceProvider: return "SP";
    case Role::kEdgeDevice: return "ED";
    case Role::kSmartDevice: return "SD";
  }
  return "?";
}

Role ParseRole(std::string_view text) {
  if (text == "SP" || text == "sp") return Role::kServiceProvider;
  if (text == "ED" || text == "ed") return Role::kEdgeDevice;
  if (text == "SD" || text == "sd") return Role::kSmartDevice;
  throw ArgumentError("unknown role: " + std::string(text));
}

nlohmann::json ReadJsonFile(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw NotFoundError("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j = nlohmann::json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) throw DecodeError(file.string() + " is not valid JSON");
  return j;
}

void WriteJsonFile(const std::filesystem::path& file, const nlohmann::json& j) {
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

// ---------------------------------------------------------------- credentials

nlohmann::json EntityCredentials::ToJson() const {
  nlohmann::json j{{"role", std::string(ToString(role))}, {"pseudo_id", pseudo_id.ToHex()}, {"pk", pk.ToJson()}};
  if (sign) j["signing_key"] = sign->ToJson();
  if (ver) j["verification_key"] = ver->ToJson();
  if (sk) j["attribute_key"] = sk->ToJson();
  return j;
}

EntityCredentials EntityCredentials::FromJson(const nlohmann::json& j) {
  EntityCredentials c;
  try {
    c.role = ParseRole(RequireString(j, "role"));
  } catch (const ArgumentError& e) {
    throw DecodeError(e.what());
  }
  c.pseudo_id = ledger::PseudoId::FromHex(RequireString(j, "pseudo_id"));
  c.pk = absc::PublicParams::FromJson(RequireField(j, "pk"));
  const auto& ctx = c.pk.context();
  if (j.contains("signing_key")) c.sign = absc::SigningKey::FromJson(j["signing_key"], ctx);
  if (j.contains("verification_key")) c.ver = absc::VerificationKey::FromJson(j["verification_key"], ctx);
  if (j.contains("attribute_key")) c.sk = absc::AttributeSecretKey::FromJson(j["attribute_key"], ctx);
  return c;
}

void EntityCredentials::Save(const std::filesystem::path& file) const { WriteJsonFile(file, ToJson()); }

EntityCredentials EntityCredentials::Load(const std::filesystem::path& file) { return FromJson(ReadJsonFile(file)); }

// ---------------------------------------------------------------- TA

TrustedAuthority TrustedAuthority::Init(absc::CurveProfile profile, Rng& rng, TaOptions options) {
  if (options.slot_seconds == 0) throw ConfigError("slot_seconds must be positive");
  if (options.quorum == 0) throw ConfigError("quorum must be at least 1");
  TrustedAuthority ta;
  auto [pk, mk] = absc::Setup(profile, rng);
  ta.pk_ = std::move(pk);
  ta.mk_ = std::move(mk);
  ta.options_ = options;
  return ta;
}

EntityCredentials TrustedAuthority::Register(const std::string& real_identity, Role role,
                                             const policy::AttributeSet& attrs, Rng& rng, bool validator) {
  if (real_identity.empty()) throw ArgumentError("real identity is empty");
  for (const auto& e : entries_) {
    if (e.real_identity == real_identity) throw ArgumentError("entity already registered: " + real_identity);
  }
  if (role == Role::kSmartDevice && attrs.empty()) throw ArgumentError("smart device registration needs attributes");
  if (validator && role != Role::kServiceProvider) throw ArgumentError("only service providers can validate");

  ledger::PseudoId id;
  bool unique = false;
  while (!unique) {
    id = ledger::PseudoId::Random(rng);
    unique = true;
    for (const auto& e : entries_) unique = unique && e.pseudo_id != id;
  }

  EntityCredentials creds;
  creds.role = role;
  creds.pseudo_id = id;
  creds.pk = pk_;
  Entry entry{real_identity, id, role, {}, validator, std::nullopt};
  if (role == Role::kServiceProvider) {
    auto [sign, ver] = absc::IssueSigningPair(pk_, mk_, rng);
    creds.sign = sign;
    creds.ver = ver;
    entry.ver = ver;
  } else if (role == Role::kSmartDevice) {
    creds.sk = absc::IssueAttributeKey(pk_, mk_, attrs, rng);
    entry.attributes = creds.sk->attributes();
  }
  entries_.push_back(std::move(entry));
  return creds;
}

std::string TrustedAuthority::Trace(const ledger::PseudoId& id) const {
  for (const auto& e : entries_) {
    if (e.pseudo_id == id) return e.real_identity;
  }
  throw NotFoundError("unknown pseudo identity " + id.ToHex());
}

ledger::PublisherRegistry TrustedAuthority::PublicRegistry() const {
  ledger::PublisherRegistry reg(pk_);
  for (const auto& e : entries_) {
    if (e.ver) reg.Register(e.pseudo_id, *e.ver);
  }
  return reg;
}

ledger::ValidatorSet TrustedAuthority::Validators() const {
  std::vector<ledger::Validator> list;
  for (const auto& e : entries_) {
    if (e.validator && e.ver) list.push_back({e.pseudo_id, *e.ver});
  }
  return ledger::ValidatorSet(std::move(list), options_.quorum, options_.slot_seconds);
}

void TrustedAuthority::Save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : entries_) {
    nlohmann::json j{{"real_identity", e.real_identity},
                     {"pseudo_id", e.pseudo_id.ToHex()},
                     {"role", std::string(ToString(e.role))},
                     {"attributes", AttributesJson(e.attributes)},
                     {"validator", e.validator}};
    if (e.ver) j["key_ver"] = e.ver->ToJson();
    entries.push_back(std::move(j));
  }
  nlohmann::json state{{"pk", pk_.ToJson()},
                       {"mk", mk_.ToJson()},
                       {"slot_seconds", options_.slot_seconds},
                       {"quorum", options_.quorum},
                       {"entities", entries}};
  WriteJsonFile(dir / kStateFile, state);
  WriteJsonFile(dir / kParamsFile, pk_.ToJson());
  WriteJsonFile(dir / kRegistryFile, PublicRegistry().ToJson());
  // validators.json appears once enough validators exist to reach quorum.
  std::size_t validators = 0;
  for (const auto& e : entries_) validators += e.validator ? 1 : 0;
  if (validators >= options_.quorum) {
    WriteJsonFile(dir / kValidatorsFile, Validators().ToJson());
  } else {
    std::filesystem::remove(dir / kValidatorsFile);
  }
}

TrustedAuthority TrustedAuthority::Load(const std::filesystem::path& dir) {
  const nlohmann::json state = ReadJsonFile(dir / kStateFile);
  TrustedAuthority ta;
  ta.pk_ = absc::PublicParams::FromJson(RequireField(state, "pk"));
  const auto& ctx = ta.pk_.context();
  ta.mk_ = absc::MasterKey::FromJson(RequireField(state, "mk"), ctx);
  ta.options_.slot_seconds = RequireU64(state, "slot_seconds");
  ta.options_.quorum = RequireU64(state, "quorum");
  for (const auto& j : RequireArray(state, "entities")) {
    Entry e;
    e.real_identity = RequireString(j, "real_identity");
    e.pseudo_id = ledger::PseudoId::FromHex(RequireString(j, "pseudo_id"));
    e.role = ParseRole(RequireString(j, "role"));
    e.attributes = AttributesFromJson(RequireArray(j, "attributes"));
    e.validator = RequireBool(j, "validator");
    if (j.contains("key_ver")) e.ver = absc::VerificationKey::FromJson(j["key_ver"], ctx);
    ta.entries_.push_back(std::move(e));
  }
  return ta;
}

absc::PublicParams LoadPublicParams(const std::filesystem::path& dir) {
  return absc::PublicParams::FromJson(ReadJsonFile(dir / kParamsFile));
}

ledger::PublisherRegistry LoadRegistry(const std::filesystem::path& dir) {
  return ledger::PublisherRegistry::FromJson(ReadJsonFile(dir / kRegistryFile));
}

ledger::ValidatorSet LoadValidators(const std::filesystem::path& dir) {
  const auto pk = LoadPublicParams(dir);
  return ledger::ValidatorSet::FromJson(ReadJsonFile(dir / kValidatorsFile), pk.context());
}

}  // namespace signcast::nodes
