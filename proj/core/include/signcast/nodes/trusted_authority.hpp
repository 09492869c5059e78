#pragma once

// Trusted Authority: runs Setup, registers entities under fresh pseudo
// identities, issues role keys and keeps the only real <-> pseudo mapping.
//
// On disk (one directory):
//   ta_state.json   TA-private: master key and real identities
//   params.json     public parameters
//   registry.json   publisher registry (pseudo id -> key_ver)
//   validators.json validator set, quorum and slot length (written once the
//                   registered validators can reach the quorum)

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "signcast/absc/scheme.hpp"
#include "signcast/ledger/poa.hpp"

namespace signcast::nodes {

enum class Role { kServiceProvider, kEdgeDevice, kSmartDevice };

std::string_view ToString(Role role);  // "SP", "ED", "SD"
Role ParseRole(std::string_view text);  // throws ArgumentError

// Key material handed to a registered entity. Carries no real identity.
struct EntityCredentials {
  Role role = Role::kSmartDevice;
  ledger::PseudoId pseudo_id;
  absc::PublicParams pk;
  std::optional<absc::SigningKey> sign;        // SP
  std::optional<absc::VerificationKey> ver;    // SP
  std::optional<absc::AttributeSecretKey> sk;  // SD

  nlohmann::json ToJson() const;
  static EntityCredentials FromJson(const nlohmann::json& j);
  void Save(const std::filesystem::path& file) const;
  static EntityCredentials Load(const std::filesystem::path& file);
};

struct TaOptions {
  std::uint64_t slot_seconds = 15;
  std::size_t quorum = 1;
};

class TrustedAuthority {
 public:
  static TrustedAuthority Init(absc::CurveProfile profile, Rng& rng, TaOptions options = {});

  const absc::PublicParams& pk() const { return pk_; }
  const TaOptions& options() const { return options_; }

  // SD requires a non-empty attribute set (ArgumentError otherwise). An SP
  // flagged as validator joins the validator set.
  EntityCredentials Register(const std::string& real_identity, Role role, const policy::AttributeSet& attrs,
                             Rng& rng, bool validator = false);

  // TA-local: never exposed on any wire endpoint. Throws NotFoundError.
  std::string Trace(const ledger::PseudoId& id) const;

  ledger::PublisherRegistry PublicRegistry() const;
  // Throws ConfigError while fewer validators than the quorum are registered.
  ledger::ValidatorSet Validators() const;

  std::size_t registration_count() const { return entries_.size(); }

  void Save(const std::filesystem::path& dir) const;
  static TrustedAuthority Load(const std::filesystem::path& dir);

 private:
  struct Entry {
    std::string real_identity;
    ledger::PseudoId pseudo_id;
    Role role;
    policy::AttributeSet attributes;
    bool validator = false;
    std::optional<absc::VerificationKey> ver;
  };

  TrustedAuthority() = default;

  absc::PublicParams pk_;
  absc::MasterKey mk_;
  TaOptions options_;
  std::vector<Entry> entries_;
};

// Public files written by TrustedAuthority::Save.
absc::PublicParams LoadPublicParams(const std::filesystem::path& dir);
ledger::PublisherRegistry LoadRegistry(const std::filesystem::path& dir);
ledger::ValidatorSet LoadValidators(const std::filesystem::path& dir);

nlohmann::json ReadJsonFile(const std::filesystem::path& file);
void WriteJsonFile(const std::filesystem::path& file, const nlohmann::json& j);

}  // namespace signcast::nodes
