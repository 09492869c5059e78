#include "signcast/nodes/validator.hpp"

#include <condition_variable>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

#include "nodes/json_server.hpp"
#include "nodes/log.hpp"
#include "signcast/detail/json_fields.hpp"
#include "signcast/ledger/chain_store.hpp"

namespace signcast::nodes {

using internal::JsonRequest;
using internal::Log;

namespace {

std::uint64_t ParseIndex(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used != text.size()) throw ArgumentError("bad index");
    return v;
  } catch (const std::logic_error&) {
    throw ArgumentError("bad block index: " + text);
  }
}

SubmitResponse Response(const ledger::Verdict& v, const Digest256& digest) {
  SubmitResponse r;
  r.accepted = v.ok();
  r.reason = std::string(ledger::ToString(v.reason));
  r.detail = v.detail;
  r.payload_digest = digest;
  return r;
}

}  // namespace

struct ValidatorNode::Impl {
  EntityCredentials creds;
  ledger::ValidatorSet vs;
  ledger::PublisherRegistry registry;
  ValidatorOptions options;
  std::shared_ptr<const ledger::Clock> clock;
  std::optional<ledger::ChainStore> store;
  std::vector<HttpClient> peers;

  ledger::Chain chain;
  std::mutex append_mu;  // chain + store writes
  std::mutex tick_mu;

  mutable std::mutex pool_mu;
  std::deque<ledger::Record> pool;
  std::set<Digest256> pooled;
  std::set<Digest256> committed;

  internal::JsonServer server;
  int port = -1;
  std::thread loop;
  std::mutex loop_mu;
  std::condition_variable loop_cv;
  bool stopping = false;

  Impl(EntityCredentials c, ledger::ValidatorSet v, ledger::PublisherRegistry r, ValidatorOptions o,
       std::shared_ptr<const ledger::Clock> clk)
      : creds(std::move(c)), vs(std::move(v)), registry(std::move(r)), options(std::move(o)), clock(std::move(clk)) {
    if (!clock) clock = std::make_shared<ledger::SystemClock>();
    if (!vs.Contains(creds.pseudo_id)) throw ConfigError("node " + creds.pseudo_id.ToHex() + " is not a validator");
    for (const auto& url : options.peers) peers.emplace_back(url, options.peer_retry, 5000);
    if (!options.chain_file.empty()) {
      store.emplace(options.chain_file);
      if (store->Exists()) {
        std::vector<ledger::Block> blocks;
        try {
          blocks = store->Load();
        } catch (const ledger::ChainStoreError& e) {
          throw ConfigError(e.what());
        }
        if (blocks.empty()) throw ConfigError("chain file is empty: " + options.chain_file.string());
        const Digest256 anchor = blocks.front().header.prev_hash;
        const auto verdict = ledger::VerifyChain(blocks, vs, registry, anchor);
        if (!verdict.ok()) {
          throw ConfigError("chain file fails verification at block " + std::to_string(verdict.first_bad_index) + ": " +
                            std::string(ledger::ToString(verdict.verdict.reason)));
        }
        chain = ledger::Chain::FromVerified(std::move(blocks), anchor);
      } else {
        store->Rewrite(chain.Blocks());
      }
    }
    for (const auto& b : chain.Blocks(1)) committed.insert(b.payload_digest());
  }

  void Commit(const ledger::Block& block) {
    if (store) store->Append(block);
    std::lock_guard lock(pool_mu);
    committed.insert(block.payload_digest());
    if (pooled.erase(block.payload_digest()) > 0) {
      std::erase_if(pool, [&](const ledger::Record& r) { return r.payload_digest == block.payload_digest(); });
    }
  }

  // Pulls blocks this node is missing from any peer that has more. Caller
  // holds append_mu.
  void CatchUpLocked() {
    for (const auto& peer : peers) {
      try {
        const auto head = ChainHead::FromJson(peer.GetJson(path::kHead));
        while (chain.size() <= head.index) {
          const auto block = ledger::Block::FromJson(peer.GetJson(BlockPath(chain.size())));
          // The serving validator attests the quorum it committed under.
          const auto v = chain.Append(block, vs, registry, vs.quorum());
          if (!v.ok()) {
            Log("validator", "catch-up block " + std::to_string(block.header.index) + " rejected: " +
                                 std::string(ledger::ToString(v.reason)));
            break;
          }
          Commit(block);
        }
      } catch (const std::exception& e) {
        Log("validator", std::string("catch-up from ") + peer.base_url() + " failed: " + e.what());
      }
    }
  }

  std::optional<ledger::Record> NextRecord() {
    std::lock_guard lock(pool_mu);
    while (!pool.empty()) {
      ledger::Record r = pool.front();
      if (committed.count(r.payload_digest) == 0) return r;
      pooled.erase(r.payload_digest);
      pool.pop_front();
    }
    return std::nullopt;
  }

  void Loop() {
    std::unique_lock lock(loop_mu);
    while (!stopping) {
      lock.unlock();
      try {
        ticker();
      } catch (const std::exception& e) {
        Log("validator", std::string("slot step failed: ") + e.what());
      }
      lock.lock();
      loop_cv.wait_for(lock, std::chrono::milliseconds(options.tick_ms), [this] { return stopping; });
    }
  }

  std::function<void()> ticker;
};

ValidatorNode::ValidatorNode(EntityCredentials creds, ledger::ValidatorSet vs, ledger::PublisherRegistry registry,
                             ValidatorOptions options, std::shared_ptr<const ledger::Clock> clock)
    : impl_(std::make_unique<Impl>(std::move(creds), std::move(vs), std::move(registry), std::move(options),
                                   std::move(clock))) {
  impl_->ticker = [this] { Tick(); };
  auto& s = impl_->server;
  s.Post(path::kRecords, [this](const JsonRequest& req) {
    ledger::Record record;
    try {
      record = ledger::Record::FromJson(req.body);
    } catch (const DecodeError& e) {
      SubmitResponse r;
      r.reason = std::string(ledger::ToString(ledger::RejectReason::kDecode));
      r.detail = e.what();
      return r.ToJson();
    }
    const bool relayed = req.params.count("relayed") > 0;
    return Submit(record, !relayed).ToJson();
  });
  s.Post(path::kApprove, [this](const JsonRequest& req) {
    return Approve(ledger::Block::FromJson(detail::RequireField(req.body, "block"))).ToJson();
  });
  s.Post(path::kBlocks, [this](const JsonRequest& req) {
    const auto block = ledger::Block::FromJson(detail::RequireField(req.body, "block"));
    return Accept(block, detail::RequireU64(req.body, "approvals")).ToJson();
  });
  s.Get(path::kHead, [this](const JsonRequest&) {
    const auto tip = impl_->chain.Tip();
    return ChainHead{tip.header.index, tip.hash}.ToJson();
  });
  s.Get(path::kHeaders, [this](const JsonRequest& req) {
    std::uint64_t from = 0;
    if (auto it = req.params.find("from"); it != req.params.end()) from = ParseIndex(it->second);
    nlohmann::json list = nlohmann::json::array();
    if (from < impl_->chain.size()) {
      for (const auto& b : impl_->chain.Blocks(from)) {
        if (list.size() >= impl_->options.max_headers_per_request) break;
        list.push_back(HeaderView::Of(b).ToJson());
      }
    }
    return nlohmann::json{{"headers", list}};
  });
  s.Get(R"(/chain/block/(\d+))", [this](const JsonRequest& req) {
    return impl_->chain.At(ParseIndex(req.matches.at(1))).ToJson();
  });
  s.Get(R"(/chain/block/(\d+)/payload)", [this](const JsonRequest& req) {
    return PayloadView::Of(impl_->chain.At(ParseIndex(req.matches.at(1)))).ToJson();
  });
}

ValidatorNode::~ValidatorNode() { Stop(); }

int ValidatorNode::Start(bool run_slot_loop) {
  impl_->port = impl_->server.Start(impl_->options.host, impl_->options.port);
  if (run_slot_loop) impl_->loop = std::thread([this] { impl_->Loop(); });
  Log("validator", "listening on " + url() + " as " + impl_->creds.pseudo_id.ToHex());
  return impl_->port;
}

void ValidatorNode::Stop() {
  {
    std::lock_guard lock(impl_->loop_mu);
    impl_->stopping = true;
  }
  impl_->loop_cv.notify_all();
  if (impl_->loop.joinable()) impl_->loop.join();
  impl_->server.Stop();
}

int ValidatorNode::port() const { return impl_->port; }
std::string ValidatorNode::url() const { return "http://" + impl_->options.host + ":" + std::to_string(impl_->port); }
const ledger::PseudoId& ValidatorNode::id() const { return impl_->creds.pseudo_id; }
ledger::Chain ValidatorNode::chain() const { return impl_->chain; }

std::size_t ValidatorNode::mempool_size() const {
  std::lock_guard lock(impl_->pool_mu);
  return impl_->pool.size();
}

SubmitResponse ValidatorNode::Submit(const ledger::Record& record, bool relay) {
  const auto verdict = ledger::ValidateRecord(record, impl_->registry);
  auto response = Response(verdict, record.payload_digest);
  if (!verdict.ok()) {
    Log("validator", "record rejected: " + response.reason + " " + response.detail);
    return response;
  }
  {
    std::lock_guard lock(impl_->pool_mu);
    if (impl_->committed.count(record.payload_digest) || impl_->pooled.count(record.payload_digest)) {
      response.detail = "duplicate";
      return response;
    }
    impl_->pool.push_back(record);
    impl_->pooled.insert(record.payload_digest);
  }
  if (relay) {
    const auto body = record.ToJson();
    for (const auto& peer : impl_->peers) {
      try {
        peer.PostJson(std::string(path::kRecords) + "?relayed=1", body);
      } catch (const std::exception& e) {
        Log("validator", std::string("relay to ") + peer.base_url() + " failed: " + e.what());
      }
    }
  }
  return response;
}

ApproveResponse ValidatorNode::Approve(const ledger::Block& block) const {
  const auto now = impl_->clock->Now();
  if (block.header.timestamp > now + impl_->vs.slot_seconds()) {
    return {false, std::string(ledger::ToString(ledger::RejectReason::kStaleTimestamp))};
  }
  const auto v = ledger::CheckLink(impl_->chain.Tip(), block, impl_->vs, impl_->registry);
  return {v.ok(), std::string(ledger::ToString(v.reason))};
}

SubmitResponse ValidatorNode::Accept(const ledger::Block& block, std::size_t approvals) {
  std::lock_guard lock(impl_->append_mu);
  if (block.header.index < impl_->chain.size()) {
    const auto have = impl_->chain.At(block.header.index);
    const bool same = have.hash == block.hash;
    return Response(same ? ledger::Verdict::Ok() : ledger::Verdict::Reject(ledger::RejectReason::kBadIndex, "fork"),
                    block.payload_digest());
  }
  if (block.header.index > impl_->chain.size()) impl_->CatchUpLocked();
  const auto v = impl_->chain.Append(block, impl_->vs, impl_->registry, approvals);
  if (v.ok()) {
    impl_->Commit(block);
    Log("validator", "committed peer block " + std::to_string(block.header.index));
  }
  return Response(v, block.payload_digest());
}

std::optional<ledger::Block> ValidatorNode::Tick() {
  std::lock_guard tick_lock(impl_->tick_mu);
  auto& I = *impl_;
  const auto now = I.clock->Now();
  const auto slot = I.vs.SlotOf(now);
  if (I.vs.LeaderForSlot(slot) != I.creds.pseudo_id) return std::nullopt;

  auto record = I.NextRecord();
  if (!record) return std::nullopt;

  ledger::Block block;
  {
    std::lock_guard lock(I.append_mu);
    if (!I.peers.empty()) I.CatchUpLocked();
    const auto tip = I.chain.Tip();
    if (tip.header.index > 0 && I.vs.SlotOf(tip.header.timestamp) >= slot) return std::nullopt;
    if (tip.header.timestamp >= now) return std::nullopt;
    block = ledger::ProposeBlock(tip, *record, I.creds.pseudo_id, now);
  }

  std::size_t approvals = 1;
  const nlohmann::json ask{{"block", block.ToJson()}};
  for (const auto& peer : I.peers) {
    try {
      const auto r = ApproveResponse::FromJson(peer.PostJson(path::kApprove, ask));
      if (r.approved) {
        ++approvals;
      } else {
        Log("validator", "peer " + peer.base_url() + " declined: " + r.reason);
      }
    } catch (const std::exception& e) {
      Log("validator", std::string("approval from ") + peer.base_url() + " failed: " + e.what());
    }
  }
  if (approvals < I.vs.quorum()) {
    Log("validator", "block " + std::to_string(block.header.index) + " short of quorum (" +
                         std::to_string(approvals) + "/" + std::to_string(I.vs.quorum()) + ")");
    return std::nullopt;
  }

  {
    std::lock_guard lock(I.append_mu);
    const auto v = I.chain.Append(block, I.vs, I.registry, approvals);
    if (!v.ok()) {
      Log("validator", "own block rejected: " + std::string(ledger::ToString(v.reason)) + " " + v.detail);
      return std::nullopt;
    }
    I.Commit(block);
  }
  Log("validator", "committed block " + std::to_string(block.header.index) + " in slot " + std::to_string(slot));

  const nlohmann::json commit{{"block", block.ToJson()}, {"approvals", approvals}};
  for (const auto& peer : I.peers) {
    try {
      peer.PostJson(path::kBlocks, commit);
    } catch (const std::exception& e) {
      Log("validator", std::string("broadcast to ") + peer.base_url() + " failed: " + e.what());
    }
  }
  return block;
}

}  // namespace signcast::nodes
