#include "signcast/nodes/smart_device.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <set>

#include "nodes/json_server.hpp"
#include "nodes/log.hpp"
#include "signcast/absc/codec.hpp"
#include "signcast/detail/json_fields.hpp"

namespace signcast::nodes {

using internal::JsonRequest;
using internal::Log;

nlohmann::json DeviceEvent::ToJson() const {
  return {{"event", event},
          {"index", index},
          {"payload_digest", payload_digest.ToHex()},
          {"message_digest", message_digest ? nlohmann::json(message_digest->ToHex()) : nlohmann::json(nullptr)},
          {"device", device},
          {"time", time},
          {"reason", reason}};
}

DeviceEvent DeviceEvent::FromJson(const nlohmann::json& j) {
  DeviceEvent e;
  e.event = detail::RequireString(j, "event");
  e.index = detail::RequireU64(j, "index");
  e.payload_digest = Digest256::FromHex(detail::RequireString(j, "payload_digest"));
  const auto& m = detail::RequireField(j, "message_digest");
  if (!m.is_null()) e.message_digest = Digest256::FromHex(m.get<std::string>());
  e.device = detail::RequireString(j, "device");
  e.time = detail::RequireU64(j, "time");
  e.reason = detail::RequireString(j, "reason");
  return e;
}

std::vector<DeviceEvent> ReadEventLog(const std::filesystem::path& file) {
  std::vector<DeviceEvent> out;
  std::ifstream in(file);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    // A line still being written is skipped, not fatal.
    if (j.is_discarded()) continue;
    out.push_back(DeviceEvent::FromJson(j));
  }
  return out;
}

struct SmartDevice::Impl {
  EntityCredentials creds;
  ledger::PublisherRegistry registry;
  ledger::ValidatorSet vs;
  DeviceOptions options;
  std::shared_ptr<const ledger::Clock> clock;
  std::optional<HttpClient> edge;

  mutable std::mutex mu;
  std::set<std::pair<std::uint64_t, Digest256>> seen;
  std::vector<DeviceEvent> events;
  std::map<std::uint64_t, Bytes> delivered;
  std::ofstream log;

  internal::JsonServer server;
  int port = -1;

  Impl(EntityCredentials c, ledger::PublisherRegistry r, ledger::ValidatorSet v, DeviceOptions o,
       std::shared_ptr<const ledger::Clock> clk)
      : creds(std::move(c)), registry(std::move(r)), vs(std::move(v)), options(std::move(o)), clock(std::move(clk)) {}

  DeviceEvent Make(std::string event, const HeaderView& h, std::string reason) const {
    DeviceEvent e;
    e.event = std::move(event);
    e.index = h.header.index;
    e.payload_digest = h.payload_digest;
    e.device = creds.pseudo_id.ToHex();
    e.time = clock->Now();
    e.reason = std::move(reason);
    return e;
  }

  // Caller holds mu.
  void RecordLocked(const DeviceEvent& e) {
    events.push_back(e);
    if (log.is_open()) {
      log << e.ToJson().dump() << '\n';
      log.flush();
    }
    Log("device", creds.pseudo_id.ToHex().substr(0, 8) + " block " + std::to_string(e.index) + ": " + e.event +
                      (e.reason.empty() ? "" : " (" + e.reason + ")"));
  }

  // `bound` is set once the payload is known to match the header hash; only
  // then is (index, hash) final for this device.
  DeviceEvent Process(const PushMessage& msg, bool& bound) {
    const HeaderView& h = msg.header;
    const auto now = clock->Now();
    const auto window = options.freshness_slots * vs.slot_seconds();
    if (now > h.header.timestamp && now - h.header.timestamp > window) {
      return Make("stale", h, "header older than " + std::to_string(options.freshness_slots) + " slots");
    }
    if (h.header.timestamp > now + vs.slot_seconds()) return Make("stale", h, "timestamp in the future");
    {
      std::lock_guard lock(mu);
      if (seen.count({h.header.index, h.hash})) return Make("duplicate", h, "");
    }
    if (!h.SelfConsistent()) return Make("alarm", h, "header-hash");
    if (!vs.Contains(h.header.proposer) || vs.LeaderAt(h.header.timestamp) != h.header.proposer) {
      return Make("alarm", h, "not-leader");
    }

    PayloadView p;
    if (msg.payload) {
      p = *msg.payload;
    } else {
      if (!edge) return Make("alarm", h, "no payload source");
      try {
        p = PayloadView::FromJson(edge->GetJson(PayloadPath(h.header.index)));
      } catch (const std::exception& e) {
        return Make("alarm", h, std::string("payload fetch failed: ") + e.what());
      }
    }
    if (p.index != h.header.index || p.payload_digest != h.payload_digest || Sha256(p.payload) != h.payload_digest) {
      return Make("alarm", h, "digest");
    }
    bound = true;

    absc::SignedCiphertext st;
    absc::MessageCiphertext ct;
    try {
      std::tie(st, ct) = absc::DecodePayload(p.payload);
    } catch (const Error& e) {
      return Make("alarm", h, std::string("decode: ") + e.what());
    }
    if (st.profile() != creds.pk.profile) return Make("alarm", h, "decode: curve profile mismatch");
    if (!policy::Satisfies(st.tree, creds.sk->attributes()).satisfied) return Make("ignored", h, "policy");

    const auto* ver = registry.Find(p.publisher);
    if (ver == nullptr) return Make("alarm", h, "unregistered");
    if (absc::PublisherKeyDigest(creds.pk, *ver) != p.publisher_pk_digest) return Make("alarm", h, "pk-digest");

    absc::DesigncryptTranscript tr;
    const auto plain = absc::Designcrypt(creds.pk, st, ct, *creds.sk, *ver, &tr);
    if (!plain) return Make("alarm", h, tr.padding_ok ? "signature" : "padding");

    auto e = Make("accepted", h, "");
    e.message_digest = Sha256(*plain);
    std::lock_guard lock(mu);
    delivered[h.header.index] = *plain;
    return e;
  }
};

SmartDevice::SmartDevice(EntityCredentials creds, ledger::PublisherRegistry registry, ledger::ValidatorSet vs,
                         DeviceOptions options, std::shared_ptr<const ledger::Clock> clock)
    : impl_(std::make_unique<Impl>(std::move(creds), std::move(registry), std::move(vs), std::move(options),
                                   std::move(clock))) {
  auto& I = *impl_;
  if (I.creds.role != Role::kSmartDevice || !I.creds.sk) throw ArgumentError("device credentials need an attribute key");
  if (!I.clock) I.clock = std::make_shared<ledger::SystemClock>();
  if (!I.options.edge_url.empty()) I.edge.emplace(I.options.edge_url, I.options.retry, 15000);
  if (!I.options.event_log.empty()) {
    I.log.open(I.options.event_log, std::ios::app);
    if (!I.log) throw ConfigError("cannot open event log " + I.options.event_log.string());
  }
  I.server.Post(path::kPush, [this](const JsonRequest& req) {
    const auto e = Handle(PushMessage::FromJson(req.body));
    return nlohmann::json{{"status", e.event}, {"reason", e.reason}};
  });
}

SmartDevice::~SmartDevice() { Stop(); }

int SmartDevice::Start() {
  auto& I = *impl_;
  I.port = I.server.Start(I.options.host, I.options.port);
  if (I.edge && I.options.subscribe) {
    const nlohmann::json body{{"url", url()}, {"mode", std::string(ToString(I.options.mode))}};
    I.edge->PostJson(path::kSubscribe, body);
  }
  Log("device", "listening on " + url() + " as " + I.creds.pseudo_id.ToHex());
  return I.port;
}

void SmartDevice::Stop() { impl_->server.Stop(); }
int SmartDevice::port() const { return impl_->port; }
std::string SmartDevice::url() const { return "http://" + impl_->options.host + ":" + std::to_string(impl_->port); }
const ledger::PseudoId& SmartDevice::id() const { return impl_->creds.pseudo_id; }

DeviceEvent SmartDevice::Handle(const PushMessage& message) {
  bool bound = false;
  DeviceEvent e = impl_->Process(message, bound);
  std::lock_guard lock(impl_->mu);
  if (bound) impl_->seen.insert({message.header.header.index, message.header.hash});
  impl_->RecordLocked(e);
  return e;
}

std::vector<DeviceEvent> SmartDevice::events() const {
  std::lock_guard lock(impl_->mu);
  return impl_->events;
}

std::optional<Bytes> SmartDevice::Delivered(std::uint64_t index) const {
  std::lock_guard lock(impl_->mu);
  auto it = impl_->delivered.find(index);
  if (it == impl_->delivered.end()) return std::nullopt;
  return it->second;
}

}  // namespace signcast::nodes
