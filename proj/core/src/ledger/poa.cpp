#include "signcast/ledger/poa.hpp"

#include <algorithm>
#include <chrono>

#include "signcast/detail/json_fields.hpp"
#include "signcast/errors.hpp"

namespace signcast::ledger {

using detail::RequireArray;
using detail::RequireField;
using detail::RequireString;
using detail::RequireU64;

std::uint64_t SystemClock::Now() const {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count());
}

ValidatorSet::ValidatorSet(std::vector<Validator> validators, std::size_t quorum, std::uint64_t slot_seconds)
    : validators_(std::move(validators)), quorum_(quorum), slot_seconds_(slot_seconds) {
  if (validators_.empty()) throw ConfigError("validator set is empty");
  if (slot_seconds_ == 0) throw ConfigError("slot_seconds must be positive");
  std::sort(validators_.begin(), validators_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < validators_.size(); ++i) {
    if (validators_[i].id == validators_[i - 1].id) throw ConfigError("duplicate validator " + validators_[i].id.ToHex());
  }
  if (quorum_ < 1 || quorum_ > validators_.size()) throw ConfigError("quorum must be between 1 and the validator count");
}

bool ValidatorSet::Contains(const PseudoId& id) const {
  return std::binary_search(validators_.begin(), validators_.end(), Validator{id, {}},
                            [](const auto& a, const auto& b) { return a.id < b.id; });
}

const PseudoId& ValidatorSet::LeaderForSlot(std::uint64_t slot) const {
  return validators_[slot % validators_.size()].id;
}

std::optional<std::uint64_t> ValidatorSet::NextSlotStartFor(const PseudoId& id, std::uint64_t after) const {
  if (!Contains(id)) return std::nullopt;
  std::uint64_t slot = SlotOf(after);
  if (slot * slot_seconds_ < after) ++slot;
  for (std::size_t i = 0; i < validators_.size(); ++i, ++slot) {
    if (LeaderForSlot(slot) == id) return slot * slot_seconds_;
  }
  return std::nullopt;
}

nlohmann::json ValidatorSet::ToJson() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& v : validators_) {
    list.push_back({{"pseudo_id", v.id.ToHex()}, {"key_ver", ToHex(v.key_ver.key_ver.ToBytes())}});
  }
  return {{"validators", list}, {"quorum", quorum_}, {"slot_seconds", slot_seconds_}};
}

ValidatorSet ValidatorSet::FromJson(const nlohmann::json& j, const absc::GroupContext& ctx) {
  std::vector<Validator> list;
  for (const auto& v : RequireArray(j, "validators")) {
    list.push_back({PseudoId::FromHex(RequireString(v, "pseudo_id")),
                    absc::VerificationKey{ctx.DecodeG2(FromHex(RequireString(v, "key_ver")))}});
  }
  return ValidatorSet(std::move(list), RequireU64(j, "quorum"), RequireU64(j, "slot_seconds"));
}

PseudoId LeaderForSlot(std::uint64_t slot, std::vector<PseudoId> ids) {
  if (ids.empty()) throw ConfigError("validator set is empty");
  std::sort(ids.begin(), ids.end());
  return ids[slot % ids.size()];
}

void PublisherRegistry::Register(const PseudoId& id, absc::VerificationKey key_ver) {
  pk_.context().CheckProfile(key_ver.key_ver.profile());
  entries_[id] = std::move(key_ver);
}

const absc::VerificationKey* PublisherRegistry::Find(const PseudoId& id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

nlohmann::json PublisherRegistry::ToJson() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [id, ver] : entries_) {
    list.push_back({{"pseudo_id", id.ToHex()}, {"key_ver", ToHex(ver.key_ver.ToBytes())}});
  }
  return {{"pk", pk_.ToJson()}, {"publishers", list}};
}

PublisherRegistry PublisherRegistry::FromJson(const nlohmann::json& j) {
  PublisherRegistry reg(absc::PublicParams::FromJson(RequireField(j, "pk")));
  const auto& ctx = reg.pk().context();
  for (const auto& e : RequireArray(j, "publishers")) {
    reg.Register(PseudoId::FromHex(RequireString(e, "pseudo_id")),
                 absc::VerificationKey{ctx.DecodeG2(FromHex(RequireString(e, "key_ver")))});
  }
  return reg;
}

}  // namespace signcast::ledger
