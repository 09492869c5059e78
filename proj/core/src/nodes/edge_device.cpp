#include "signcast/nodes/edge_device.hpp"

#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>

#include "nodes/json_server.hpp"
#include "nodes/log.hpp"
#include "signcast/detail/json_fields.hpp"

namespace signcast::nodes {

using internal::JsonRequest;
using internal::Log;

std::string_view ToString(DeliveryMode mode) { return mode == DeliveryMode::kPush ? "push" : "pull"; }

DeliveryMode ParseDeliveryMode(std::string_view text) {
  if (text == "pull") return DeliveryMode::kPull;
  if (text == "push") return DeliveryMode::kPush;
  throw ArgumentError("unknown delivery mode: " + std::string(text));
}

std::string_view ToString(EdgeFault fault) {
  switch (fault) {
    case EdgeFault::kNone: return "none";
    case EdgeFault::kTamperPayload: return "tamper-payload";
    case EdgeFault::kCorruptPayload: return "corrupt-payload";
  }
  return "?";
}

EdgeFault ParseEdgeFault(std::string_view text) {
  if (text == "none") return EdgeFault::kNone;
  if (text == "tamper-payload") return EdgeFault::kTamperPayload;
  if (text == "corrupt-payload") return EdgeFault::kCorruptPayload;
  throw ArgumentError("unknown fault: " + std::string(text));
}

namespace {

std::uint64_t ParseIndex(const std::string& text) {
  try {
    return std::stoull(text);
  } catch (const std::logic_error&) {
    throw ArgumentError("bad block index: " + text);
  }
}

bool EntryIntact(const CacheEntry& e, const Digest256& verified_hash) {
  if (e.header.hash != verified_hash || !e.header.SelfConsistent()) return false;
  if (!e.payload) return e.header.payload_digest == Digest256{};
  return Sha256(e.payload->payload) == e.header.payload_digest && e.payload->payload_digest == e.header.payload_digest;
}

CacheEntry EntryOf(const ledger::Block& block) {
  CacheEntry e;
  e.index = block.header.index;
  e.header = HeaderView::Of(block);
  if (block.record) e.payload = PayloadView::Of(block);
  e.fetched_at = std::chrono::system_clock::now();
  return e;
}

}  // namespace

struct EdgeNode::Impl {
  ledger::ValidatorSet vs;
  ledger::PublisherRegistry registry;
  EdgeOptions options;
  HttpClient validator;

  mutable std::mutex mu;  // everything below
  std::vector<Digest256> verified;  // hash of each verified block, by index
  std::optional<ledger::Block> tip;  // last verified block
  std::map<std::uint64_t, CacheEntry> cache;
  std::vector<DeviceTarget> devices;
  std::optional<ledger::Verdict> rejection;
  std::uint64_t refetches = 0;

  std::mutex sync_mu;
  internal::JsonServer server;
  int port = -1;
  std::thread loop;
  std::mutex loop_mu;
  std::condition_variable loop_cv;
  bool stopping = false;

  Impl(ledger::ValidatorSet v, ledger::PublisherRegistry r, EdgeOptions o)
      : vs(std::move(v)),
        registry(std::move(r)),
        options(std::move(o)),
        validator(options.validator_url, options.retry, 5000),
        devices(options.devices) {}

  // Applies the configured fault to an outgoing view.
  void Distort(HeaderView& h, std::optional<PayloadView>& p) const {
    if (options.fault == EdgeFault::kNone || !p || p->payload.empty()) return;
    p->payload.back() ^= 0x01;  // last byte lies in the ciphertext body
    if (options.fault == EdgeFault::kTamperPayload) {
      const Digest256 d = Sha256(p->payload);
      p->payload_digest = d;
      h.payload_digest = d;
      h.hash = ledger::BlockHash(h.header, d);
    }
  }

  // Returns a verified entry, refetching from the validator on mismatch.
  // Caller holds mu.
  CacheEntry& VerifiedEntryLocked(std::uint64_t index) {
    if (index >= verified.size()) throw NotFoundError("block " + std::to_string(index) + " not cached");
    auto it = cache.find(index);
    if (it != cache.end() && EntryIntact(it->second, verified[index])) return it->second;
    ++refetches;
    Log("edge", "cache entry " + std::to_string(index) + " failed verification, refetching");
    const auto block = ledger::Block::FromJson(validator.GetJson(BlockPath(index)));
    CacheEntry fresh = EntryOf(block);
    if (block.ComputeHash() != verified[index] || !EntryIntact(fresh, verified[index])) {
      throw Error("validator served a block that does not match verified hash " + std::to_string(index));
    }
    return cache[index] = std::move(fresh);
  }

  void Push(const std::vector<std::uint64_t>& fresh) {
    std::vector<DeviceTarget> targets;
    {
      std::lock_guard lock(mu);
      targets = devices;
    }
    for (const auto index : fresh) {
      PushMessage full;
      {
        std::lock_guard lock(mu);
        auto& e = VerifiedEntryLocked(index);
        if (!e.payload) continue;
        full.header = e.header;
        full.payload = e.payload;
      }
      Distort(full.header, full.payload);
      PushMessage header_only{full.header, std::nullopt};
      for (const auto& d : targets) {
        try {
          HttpClient client(d.url, options.retry, 15000);
          const auto& msg = d.mode == DeliveryMode::kPush ? full : header_only;
          client.PostJson(path::kPush, msg.ToJson());
        } catch (const std::exception& e) {
          Log("edge", "push of block " + std::to_string(index) + " to " + d.url + " failed: " + e.what());
        }
      }
    }
  }

  void Loop(EdgeNode* self) {
    std::unique_lock lock(loop_mu);
    while (!stopping) {
      lock.unlock();
      try {
        self->SyncOnce();
      } catch (const std::exception& e) {
        Log("edge", std::string("sync failed: ") + e.what());
      }
      lock.lock();
      loop_cv.wait_for(lock, std::chrono::milliseconds(options.poll_ms), [this] { return stopping; });
    }
  }
};

EdgeNode::EdgeNode(ledger::ValidatorSet vs, ledger::PublisherRegistry registry, EdgeOptions options)
    : impl_(std::make_unique<Impl>(std::move(vs), std::move(registry), std::move(options))) {
  auto& s = impl_->server;
  s.Get(path::kHead, [this](const JsonRequest&) {
    std::lock_guard lock(impl_->mu);
    if (impl_->verified.empty()) throw NotFoundError("no verified blocks yet");
    return ChainHead{impl_->verified.size() - 1, impl_->verified.back()}.ToJson();
  });
  s.Get(path::kHeaders, [this](const JsonRequest& req) {
    std::uint64_t from = 0;
    if (auto it = req.params.find("from"); it != req.params.end()) from = ParseIndex(it->second);
    nlohmann::json list = nlohmann::json::array();
    for (std::uint64_t i = from; i < verified_size(); ++i) list.push_back(ServeHeader(i).ToJson());
    return nlohmann::json{{"headers", list}};
  });
  s.Get(R"(/chain/block/(\d+)/payload)",
        [this](const JsonRequest& req) { return ServePayload(ParseIndex(req.matches.at(1))).ToJson(); });
  s.Post(path::kSubscribe, [this](const JsonRequest& req) {
    DeviceTarget d{detail::RequireString(req.body, "url"),
                   ParseDeliveryMode(detail::RequireString(req.body, "mode"))};
    Subscribe(d);
    return nlohmann::json{{"subscribed", true}};
  });
}

EdgeNode::~EdgeNode() { Stop(); }

int EdgeNode::Start(bool run_sync_loop) {
  impl_->port = impl_->server.Start(impl_->options.host, impl_->options.port);
  if (run_sync_loop) impl_->loop = std::thread([this] { impl_->Loop(this); });
  Log("edge", "listening on " + url() + ", following " + impl_->options.validator_url +
                  (impl_->options.fault != EdgeFault::kNone ? ", fault " + std::string(ToString(impl_->options.fault))
                                                            : std::string()));
  return impl_->port;
}

void EdgeNode::Stop() {
  {
    std::lock_guard lock(impl_->loop_mu);
    impl_->stopping = true;
  }
  impl_->loop_cv.notify_all();
  if (impl_->loop.joinable()) impl_->loop.join();
  impl_->server.Stop();
}

int EdgeNode::port() const { return impl_->port; }
std::string EdgeNode::url() const { return "http://" + impl_->options.host + ":" + std::to_string(impl_->port); }

void EdgeNode::Subscribe(DeviceTarget device) {
  std::lock_guard lock(impl_->mu);
  for (auto& d : impl_->devices) {
    if (d.url == device.url) {
      d.mode = device.mode;
      return;
    }
  }
  Log("edge", "device subscribed: " + device.url + " (" + std::string(ToString(device.mode)) + ")");
  impl_->devices.push_back(std::move(device));
}

std::size_t EdgeNode::SyncOnce() {
  std::lock_guard sync_lock(impl_->sync_mu);
  auto& I = *impl_;
  const auto head = ChainHead::FromJson(I.validator.GetJson(path::kHead));
  std::vector<std::uint64_t> fresh;
  for (;;) {
    std::uint64_t next;
    {
      std::lock_guard lock(I.mu);
      next = I.verified.size();
    }
    if (next > head.index) break;
    const auto block = ledger::Block::FromJson(I.validator.GetJson(BlockPath(next)));
    ledger::Verdict v;
    if (next == 0) {
      if (!(block == ledger::Genesis(I.options.anchor))) {
        v = ledger::Verdict::Reject(ledger::RejectReason::kGenesis, "unexpected genesis");
      }
    } else {
      std::lock_guard lock(I.mu);
      v = ledger::CheckLink(*I.tip, block, I.vs, I.registry);
    }
    if (!v.ok()) {
      Log("edge", "block " + std::to_string(next) + " rejected: " + std::string(ledger::ToString(v.reason)) + " " +
                      v.detail);
      std::lock_guard lock(I.mu);
      I.rejection = v;
      break;
    }
    {
      std::lock_guard lock(I.mu);
      I.verified.push_back(block.hash);
      I.tip = block;
      I.cache[next] = EntryOf(block);
      I.rejection.reset();
    }
    if (block.record) fresh.push_back(next);
  }
  if (!fresh.empty()) I.Push(fresh);
  return fresh.size();
}

std::size_t EdgeNode::verified_size() const {
  std::lock_guard lock(impl_->mu);
  return impl_->verified.size();
}

std::optional<ledger::Verdict> EdgeNode::last_rejection() const {
  std::lock_guard lock(impl_->mu);
  return impl_->rejection;
}

std::uint64_t EdgeNode::refetch_count() const {
  std::lock_guard lock(impl_->mu);
  return impl_->refetches;
}

HeaderView EdgeNode::ServeHeader(std::uint64_t index) {
  HeaderView h;
  std::optional<PayloadView> p;
  {
    std::lock_guard lock(impl_->mu);
    auto& e = impl_->VerifiedEntryLocked(index);
    h = e.header;
    p = e.payload;
  }
  impl_->Distort(h, p);
  return h;
}

PayloadView EdgeNode::ServePayload(std::uint64_t index) {
  HeaderView h;
  std::optional<PayloadView> p;
  {
    std::lock_guard lock(impl_->mu);
    auto& e = impl_->VerifiedEntryLocked(index);
    h = e.header;
    p = e.payload;
  }
  if (!p) throw NotFoundError("block " + std::to_string(index) + " carries no record");
  impl_->Distort(h, p);
  return *p;
}

void EdgeNode::CorruptCacheEntry(std::uint64_t index) {
  std::lock_guard lock(impl_->mu);
  auto it = impl_->cache.find(index);
  if (it == impl_->cache.end()) throw NotFoundError("block " + std::to_string(index) + " not cached");
  if (it->second.payload && !it->second.payload->payload.empty()) {
    it->second.payload->payload[it->second.payload->payload.size() / 2] ^= 0x80;
  } else {
    it->second.header.hash.bytes[0] ^= 0x80;
  }
}

}  // namespace signcast::nodes
