#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <mutex>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "signcast/nodes/edge_device.hpp"
#include "signcast/nodes/http_client.hpp"
#include "signcast/nodes/service_provider.hpp"
#include "signcast/nodes/smart_device.hpp"
#include "signcast/nodes/trusted_authority.hpp"
#include "signcast/nodes/validator.hpp"
#include "signcast/nodes/wire.hpp"
#include "signcast/policy/parser.hpp"

namespace signcast::nodes {
namespace {

using absc::CurveProfile;
using ledger::ManualClock;

constexpr std::uint64_t kSlot = 15;
constexpr std::uint64_t kStart = 1'000'000 * kSlot;

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("signcast_nodes_" + std::to_string(::getpid())) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

Bytes Msg(std::string_view s) { return Bytes(s.begin(), s.end()); }

int FreePort() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

class EnvQuiet : public ::testing::Environment {
 public:
  void SetUp() override { ::setenv("SIGNCAST_QUIET", "1", 1); }
};
const auto* const kQuiet = ::testing::AddGlobalTestEnvironment(new EnvQuiet);

// TA plus a registered population; validators are sp1..spN.
struct Deployment {
  explicit Deployment(std::size_t validators = 1, std::size_t quorum = 1,
                      CurveProfile profile = CurveProfile::kAsymmetric159)
      : rng(5), ta(TrustedAuthority::Init(profile, rng, {kSlot, quorum})) {
    for (std::size_t i = 1; i <= validators; ++i) {
      sps.push_back(ta.Register("sp" + std::to_string(i) + "-real-name", Role::kServiceProvider, {}, rng, true));
    }
    publisher = ta.Register("publisher-real-name", Role::kServiceProvider, {}, rng);
    sd1 = ta.Register("sd1-real-name", Role::kSmartDevice, {"firmware", "model-x"}, rng);
    sd2 = ta.Register("sd2-real-name", Role::kSmartDevice, {"other"}, rng);
    ed = ta.Register("ed-real-name", Role::kEdgeDevice, {}, rng);
    clock = std::make_shared<ManualClock>(kStart);
  }

  const ledger::PseudoId& LeaderAt(std::uint64_t t) const { return ta.Validators().LeaderAt(t); }
  // Moves the clock forward to the start of the next slot led by `id`.
  void AdvanceToLeader(const ledger::PseudoId& id) {
    clock->Set(*ta.Validators().NextSlotStartFor(id, clock->Now() + 1) + 1);
  }

  SeededRng rng;
  TrustedAuthority ta;
  std::vector<EntityCredentials> sps;
  EntityCredentials publisher, sd1, sd2, ed;
  std::shared_ptr<ManualClock> clock;
};

TEST(TrustedAuthority, RegistrationRules) {
  SeededRng rng(1);
  EXPECT_THROW(TrustedAuthority::Init(CurveProfile::kAsymmetric159, rng, {0, 1}), ConfigError);
  EXPECT_THROW(TrustedAuthority::Init(CurveProfile::kAsymmetric159, rng, {15, 0}), ConfigError);
  auto ta = TrustedAuthority::Init(CurveProfile::kAsymmetric159, rng, {15, 2});
  EXPECT_THROW(ta.Register("", Role::kServiceProvider, {}, rng), ArgumentError);
  EXPECT_THROW(ta.Register("dev", Role::kSmartDevice, {}, rng), ArgumentError);
  EXPECT_THROW(ta.Register("edge", Role::kEdgeDevice, {}, rng, true), ArgumentError);
  const auto a = ta.Register("alice", Role::kServiceProvider, {}, rng, true);
  EXPECT_THROW(ta.Register("alice", Role::kServiceProvider, {}, rng), ArgumentError);
  EXPECT_THROW(ta.Validators(), ConfigError);
  const auto b = ta.Register("bob", Role::kServiceProvider, {}, rng, true);
  EXPECT_EQ(ta.Validators().validators().size(), 2u);
  EXPECT_NE(a.pseudo_id, b.pseudo_id);
  EXPECT_EQ(ta.Trace(a.pseudo_id), "alice");
  EXPECT_THROW(ta.Trace(ledger::PseudoId{}), NotFoundError);
  EXPECT_TRUE(a.sign && a.ver && !a.sk);
  EXPECT_TRUE(absc::CheckSigningPair(ta.pk(), *a.sign, *a.ver));

  const auto d = ta.Register("dev", Role::kSmartDevice, {"x"}, rng);
  EXPECT_TRUE(d.sk && !d.sign);
  EXPECT_EQ(ta.PublicRegistry().entries().size(), 2u);
  EXPECT_EQ(ta.registration_count(), 3u);
  EXPECT_EQ(ParseRole("sd"), Role::kSmartDevice);
  EXPECT_EQ(ToString(Role::kEdgeDevice), "ED");
  EXPECT_THROW(ParseRole("xx"), ArgumentError);
}

TEST(TrustedAuthority, SaveLoadAndPublicFiles) {
  SeededRng rng(2);
  auto ta = TrustedAuthority::Init(CurveProfile::kAsymmetric159, rng, {5, 2});
  const auto dir = TempDir("ta");
  const auto a = ta.Register("alice", Role::kServiceProvider, {}, rng, true);
  ta.Save(dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "params.json"));
  EXPECT_FALSE(std::filesystem::exists(dir / "validators.json"));
  ta.Register("bob", Role::kServiceProvider, {}, rng, true);
  ta.Save(dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "validators.json"));

  const auto back = TrustedAuthority::Load(dir);
  EXPECT_EQ(back.pk(), ta.pk());
  EXPECT_EQ(back.Trace(a.pseudo_id), "alice");
  EXPECT_EQ(back.options().slot_seconds, 5u);
  EXPECT_EQ(LoadPublicParams(dir), ta.pk());
  EXPECT_EQ(LoadRegistry(dir).entries(), ta.PublicRegistry().entries());
  EXPECT_EQ(LoadValidators(dir).quorum(), 2u);

  // Public files carry no real identities.
  for (const char* f : {"params.json", "registry.json", "validators.json"}) {
    const std::string text = ReadJsonFile(dir / f).dump();
    EXPECT_EQ(text.find("alice"), std::string::npos) << f;
    EXPECT_EQ(text.find("bob"), std::string::npos) << f;
  }
  a.Save(dir / "alice.json");
  const auto creds = EntityCredentials::Load(dir / "alice.json");
  EXPECT_EQ(creds.pseudo_id, a.pseudo_id);
  EXPECT_EQ(creds.ver, a.ver);
  EXPECT_THROW(ReadJsonFile(dir / "missing.json"), NotFoundError);
  std::ofstream(dir / "broken.json") << "{";
  EXPECT_THROW(ReadJsonFile(dir / "broken.json"), DecodeError);
}

TEST(ServiceProvider, RequiresSigningCredentials) {
  Deployment d;
  EXPECT_THROW(ServiceProvider{d.sd1}, ArgumentError);
  ServiceProvider sp(d.publisher);
  EXPECT_EQ(sp.publisher_pk_digest(), absc::PublisherKeyDigest(d.ta.pk(), *d.publisher.ver));
  EXPECT_THROW(sp.MakeRecord(Msg("m"), "a and", d.rng), policy::PolicyParseError);
}

TEST(Validator, RejectionsComeBackVerbatim) {
  Deployment d;
  ValidatorNode v(d.sps[0], d.ta.Validators(), d.ta.PublicRegistry(), {}, d.clock);
  v.Start(false);
  HttpClient client(v.url(), {1, 10, 10});
  ServiceProvider sp(d.publisher);

  // A publisher unknown to this validator's registry.
  SeededRng other_rng(9);
  auto other = TrustedAuthority::Init(CurveProfile::kAsymmetric159, other_rng, {kSlot, 1});
  ServiceProvider stranger(other.Register("stranger", Role::kServiceProvider, {}, other_rng));
  auto r = stranger.Publish(stranger.MakeRecord(Msg("x"), "firmware", d.rng), client);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.reason, "unregistered");

  auto rec = sp.MakeRecord(Msg("hello"), "firmware", d.rng);
  auto bad_digest = rec;
  bad_digest.payload_digest.bytes[0] ^= 1;
  r = sp.Publish(bad_digest, client);
  EXPECT_EQ(r.reason, "digest");

  auto bad_pk = rec;
  bad_pk.publisher_pk_digest.bytes[0] ^= 1;
  r = sp.Publish(bad_pk, client);
  EXPECT_EQ(r.reason, "pk-digest");

  // Undecodable body.
  try {
    const auto resp = client.PostJson(path::kRecords, {{"record", "nonsense"}});
    EXPECT_EQ(SubmitResponse::FromJson(resp).reason, "decode");
  } catch (const HttpStatusError& e) {
    EXPECT_NE(e.body().find("decode"), std::string::npos);
  }

  r = sp.Publish(rec, client);
  EXPECT_TRUE(r.accepted) << r.reason << " " << r.detail;
  EXPECT_EQ(r.payload_digest, rec.payload_digest);
  r = sp.Publish(rec, client);
  EXPECT_TRUE(r.accepted);
  EXPECT_EQ(r.detail, "duplicate");
  EXPECT_EQ(v.mempool_size(), 1u);
  v.Stop();
}

TEST(Validator, SingleValidatorCommitsOneBlockPerSlot) {
  Deployment d;
  const auto chain_file = TempDir("v1") / "chain.jsonl";
  ValidatorOptions opts;
  opts.chain_file = chain_file;
  auto node = std::make_unique<ValidatorNode>(d.sps[0], d.ta.Validators(), d.ta.PublicRegistry(), opts, d.clock);
  ServiceProvider sp(d.publisher);
  for (int i = 0; i < 3; ++i) {
    EXPECT_TRUE(node->Submit(sp.MakeRecord(Msg("m" + std::to_string(i)), "firmware", d.rng)).accepted);
  }
  const auto b1 = node->Tick();
  ASSERT_TRUE(b1.has_value());
  EXPECT_EQ(b1->header.index, 1u);
  EXPECT_FALSE(node->Tick().has_value());  // slot already has a block
  d.clock->Advance(kSlot);
  ASSERT_TRUE(node->Tick().has_value());
  EXPECT_EQ(node->chain().size(), 3u);
  EXPECT_EQ(node->mempool_size(), 1u);

  // Restart from the chain file.
  node.reset();
  ValidatorNode again(d.sps[0], d.ta.Validators(), d.ta.PublicRegistry(), opts, d.clock);
  EXPECT_EQ(again.chain().size(), 3u);

  // A corrupted chain file refuses to load.
  std::string text;
  {
    std::ifstream in(chain_file);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  text[text.size() / 2] = text[text.size() / 2] == 'a' ? 'b' : 'a';
  std::ofstream(chain_file, std::ios::trunc) << text;
  EXPECT_THROW(ValidatorNode(d.sps[0], d.ta.Validators(), d.ta.PublicRegistry(), opts, d.clock), ConfigError);
}

TEST(Validator, QuorumOfTwoReplicatesAcrossPeers) {
  Deployment d(2, 2);
  const int pa = FreePort(), pb = FreePort();
  ValidatorOptions oa, ob;
  oa.port = pa;
  ob.port = pb;
  oa.peers = {"http://127.0.0.1:" + std::to_string(pb)};
  ob.peers = {"http://127.0.0.1:" + std::to_string(pa)};
  ValidatorNode va(d.sps[0], d.ta.Validators(), d.ta.PublicRegistry(), oa, d.clock);
  ValidatorNode b2(d.sps[1], d.ta.Validators(), d.ta.PublicRegistry(), ob, d.clock);
  ASSERT_EQ(va.Start(false), pa);
  ASSERT_EQ(b2.Start(false), pb);

  ServiceProvider sp(d.publisher);
  HttpClient to_b(b2.url(), {2, 20, 50});
  const auto rec = sp.MakeRecord(Msg("replicated"), "firmware", d.rng);
  EXPECT_TRUE(sp.Publish(rec, to_b).accepted);
  // Relay reaches the other validator.
  EXPECT_EQ(va.mempool_size(), 1u);

  std::optional<ledger::Block> made;
  for (int step = 0; step < 4 && !made; ++step) {
    d.clock->Advance(kSlot);
    made = d.LeaderAt(d.clock->Now()) == va.id() ? va.Tick() : b2.Tick();
  }
  ASSERT_TRUE(made.has_value());
  EXPECT_EQ(va.chain().Blocks(), b2.chain().Blocks());
  EXPECT_EQ(va.chain().size(), 2u);
  EXPECT_EQ(va.mempool_size(), 0u);
  EXPECT_EQ(b2.mempool_size(), 0u);

  // A validator alone cannot commit with quorum 2.
  va.Stop();
  EXPECT_TRUE(b2.Submit(sp.MakeRecord(Msg("lonely"), "firmware", d.rng), false).accepted);
  d.AdvanceToLeader(b2.id());
  EXPECT_FALSE(b2.Tick().has_value());
  EXPECT_EQ(b2.mempool_size(), 1u);
  b2.Stop();
}

TEST(Validator, ApproveAndAcceptChecks) {
  Deployment d(2, 1);
  ValidatorNode a(d.sps[0], d.ta.Validators(), d.ta.PublicRegistry(), {}, d.clock);
  ValidatorNode b(d.sps[1], d.ta.Validators(), d.ta.PublicRegistry(), {}, d.clock);
  ServiceProvider sp(d.publisher);
  EXPECT_TRUE(a.Submit(sp.MakeRecord(Msg("one"), "firmware", d.rng), false).accepted);
  d.AdvanceToLeader(a.id());
  const auto blk = a.Tick();
  ASSERT_TRUE(blk.has_value());
  EXPECT_TRUE(b.Approve(*blk).approved);
  auto forged = *blk;
  forged.header.timestamp = d.clock->Now() + 10 * kSlot;
  forged.Seal();
  EXPECT_FALSE(b.Approve(forged).approved);
  EXPECT_EQ(b.Accept(*blk, 0).reason, "quorum");
  EXPECT_TRUE(b.Accept(*blk, 1).accepted);
  EXPECT_TRUE(b.Accept(*blk, 1).accepted);  // idempotent
  EXPECT_EQ(b.chain().Tip(), *blk);
}

struct Pipeline {
  explicit Pipeline(Deployment& d, EdgeFault fault = EdgeFault::kNone)
      : validator(d.sps[0], d.ta.Validators(), d.ta.PublicRegistry(), {}, d.clock) {
    validator.Start(false);
    EdgeOptions eo;
    eo.validator_url = validator.url();
    eo.fault = fault;
    edge = std::make_unique<EdgeNode>(d.ta.Validators(), d.ta.PublicRegistry(), eo);
    edge->Start(false);
  }
  ~Pipeline() {
    edge->Stop();
    validator.Stop();
  }
  ValidatorNode validator;
  std::unique_ptr<EdgeNode> edge;
};

std::uint64_t CommitOne(Deployment& d, ValidatorNode& v, std::string_view msg, std::string_view policy) {
  ServiceProvider sp(d.publisher);
  EXPECT_TRUE(v.Submit(sp.MakeRecord(Msg(msg), policy, d.rng)).accepted);
  d.AdvanceToLeader(v.id());
  const auto b = v.Tick();
  EXPECT_TRUE(b.has_value());
  return b ? b->header.index : 0;
}

TEST(EdgeNode, VerifiesFollowsAndRefetchesCorruptCache) {
  Deployment d;
  Pipeline p(d);
  const auto i1 = CommitOne(d, p.validator, "first", "firmware");
  const auto i2 = CommitOne(d, p.validator, "second", "firmware");
  EXPECT_EQ(p.edge->SyncOnce(), 2u);
  EXPECT_EQ(p.edge->verified_size(), 3u);
  EXPECT_EQ(p.edge->SyncOnce(), 0u);
  EXPECT_FALSE(p.edge->last_rejection().has_value());

  const auto honest = p.edge->ServePayload(i2);
  EXPECT_EQ(honest.payload_digest, p.validator.chain().At(i2).payload_digest());
  p.edge->CorruptCacheEntry(i1);
  const auto served = p.edge->ServePayload(i1);
  EXPECT_EQ(p.edge->refetch_count(), 1u);
  EXPECT_EQ(served.payload, p.validator.chain().At(i1).record->Payload());
  EXPECT_EQ(p.edge->ServeHeader(i1), HeaderView::Of(p.validator.chain().At(i1)));
  EXPECT_THROW(p.edge->ServeHeader(99), NotFoundError);

  // Same data over HTTP.
  HttpClient client(p.edge->url(), {1, 10, 10});
  const auto head = ChainHead::FromJson(client.GetJson(path::kHead));
  EXPECT_EQ(head.index, i2);
  const auto pv = PayloadView::FromJson(client.GetJson(PayloadPath(i2)));
  EXPECT_EQ(pv.payload, honest.payload);
}

class DeviceTest : public ::testing::Test {
 protected:
  DeviceTest() : pipe(d) {
    DeviceOptions o;
    o.edge_url = pipe.edge->url();
    o.subscribe = false;
    sd1 = std::make_unique<SmartDevice>(d.sd1, d.ta.PublicRegistry(), d.ta.Validators(), o, d.clock);
    sd2 = std::make_unique<SmartDevice>(d.sd2, d.ta.PublicRegistry(), d.ta.Validators(), o, d.clock);
  }

  PushMessage Full(std::uint64_t index) { return {pipe.edge->ServeHeader(index), pipe.edge->ServePayload(index)}; }

  Deployment d;
  Pipeline pipe;
  std::unique_ptr<SmartDevice> sd1, sd2;
};

TEST_F(DeviceTest, AcceptIgnoreDuplicateStale) {
  const auto idx = CommitOne(d, pipe.validator, "firmware image 7", "firmware and model-x");
  pipe.edge->SyncOnce();
  const auto e = sd1->Handle(Full(idx));
  EXPECT_EQ(e.event, "accepted") << e.reason;
  ASSERT_TRUE(e.message_digest.has_value());
  EXPECT_EQ(*e.message_digest, Sha256(std::string_view("firmware image 7")));
  EXPECT_EQ(sd1->Delivered(idx), Msg("firmware image 7"));
  EXPECT_EQ(e.device, d.sd1.pseudo_id.ToHex());
  EXPECT_EQ(sd1->Handle(Full(idx)).event, "duplicate");

  const auto ig = sd2->Handle(Full(idx));
  EXPECT_EQ(ig.event, "ignored");
  EXPECT_EQ(ig.reason, "policy");
  EXPECT_FALSE(sd2->Delivered(idx).has_value());

  // A header older than the freshness window.
  const auto idx2 = CommitOne(d, pipe.validator, "later", "firmware");
  pipe.edge->SyncOnce();
  const auto msg = Full(idx2);
  d.clock->Advance((kDefaultFreshnessSlots + 1) * kSlot);
  EXPECT_EQ(sd1->Handle(msg).event, "stale");
  EXPECT_EQ(sd1->events().size(), 3u);
}

TEST_F(DeviceTest, AlarmsForForgedOrDamagedMessages) {
  const auto idx = CommitOne(d, pipe.validator, "genuine", "firmware");
  pipe.edge->SyncOnce();

  auto bad_hash = Full(idx);
  bad_hash.header.header.timestamp -= 1;
  auto ev = sd1->Handle(bad_hash);
  EXPECT_EQ(ev.event, "alarm");
  EXPECT_EQ(ev.reason, "header-hash");

  auto digest = Full(idx);
  digest.payload->payload.back() ^= 1;
  ev = sd1->Handle(digest);
  EXPECT_EQ(ev.reason, "digest");

  // A rewritten payload with a matching re-sealed header still needs to
  // pass designcryption.
  auto tampered = Full(idx);
  tampered.payload->payload.back() ^= 1;
  tampered.payload->payload_digest = Sha256(tampered.payload->payload);
  tampered.header.payload_digest = tampered.payload->payload_digest;
  tampered.header.hash = ledger::BlockHash(tampered.header.header, tampered.header.payload_digest);
  ev = sd1->Handle(tampered);
  EXPECT_EQ(ev.event, "alarm");
  EXPECT_TRUE(ev.reason == "padding" || ev.reason == "signature") << ev.reason;

  auto garbage = tampered;
  garbage.payload->payload = Msg("not a payload");
  garbage.payload->payload_digest = Sha256(garbage.payload->payload);
  garbage.header.payload_digest = garbage.payload->payload_digest;
  garbage.header.hash = ledger::BlockHash(garbage.header.header, garbage.header.payload_digest);
  ev = sd1->Handle(garbage);
  EXPECT_EQ(ev.reason.rfind("decode", 0), 0u) << ev.reason;

  // None of the forgeries above blocks the genuine record. Header-only
  // message: the device pulls the payload itself.
  ev = sd1->Handle({pipe.edge->ServeHeader(idx), std::nullopt});
  EXPECT_EQ(ev.event, "accepted") << ev.reason;
  EXPECT_EQ(sd1->Delivered(idx), Msg("genuine"));
  EXPECT_EQ(sd1->Handle({pipe.edge->ServeHeader(idx), std::nullopt}).event, "duplicate");
}

TEST(DeviceFlow, PushAndPullOverHttp) {
  Deployment d;
  Pipeline p(d);
  const auto dir = TempDir("flow");
  DeviceOptions o1;
  o1.edge_url = p.edge->url();
  o1.mode = DeliveryMode::kPull;
  o1.event_log = dir / "sd1.jsonl";
  SmartDevice sd1(d.sd1, d.ta.PublicRegistry(), d.ta.Validators(), o1, d.clock);
  sd1.Start();
  DeviceOptions o2 = o1;
  o2.mode = DeliveryMode::kPush;
  o2.event_log = dir / "sd2.jsonl";
  SmartDevice sd2(d.sd2, d.ta.PublicRegistry(), d.ta.Validators(), o2, d.clock);
  sd2.Start();

  const auto idx = CommitOne(d, p.validator, "over the wire", "firmware or other");
  p.edge->SyncOnce();
  const auto e1 = ReadEventLog(o1.event_log);
  const auto e2 = ReadEventLog(o2.event_log);
  ASSERT_EQ(e1.size(), 1u);
  ASSERT_EQ(e2.size(), 1u);
  EXPECT_EQ(e1[0].event, "accepted");
  EXPECT_EQ(e2[0].event, "accepted");
  EXPECT_EQ(e1[0].index, idx);
  EXPECT_EQ(sd2.Delivered(idx), Msg("over the wire"));
  sd1.Stop();
  sd2.Stop();
}

// Nothing on the wire names a real identity or carries plaintext.
TEST(WirePrivacy, TapSeesNoIdentitiesOrPlaintext) {
  std::mutex mu;
  std::vector<std::string> bodies;
  HttpClient::SetGlobalTap([&](const std::string&, const std::string& p, const std::string& body) {
    std::lock_guard lock(mu);
    bodies.push_back(p + " " + body);
  });
  {
    Deployment d;
    Pipeline p(d);
    DeviceOptions o;
    o.edge_url = p.edge->url();
    SmartDevice sd(d.sd1, d.ta.PublicRegistry(), d.ta.Validators(), o, d.clock);
    sd.Start();
    const std::string secret = "TOP-SECRET-FIRMWARE-PAYLOAD";
    ServiceProvider sp(d.publisher);
    HttpClient client(p.validator.url());
    EXPECT_TRUE(sp.Publish(sp.MakeRecord(Msg(secret), "firmware", d.rng), client).accepted);
    d.AdvanceToLeader(p.validator.id());
    ASSERT_TRUE(p.validator.Tick().has_value());
    p.edge->SyncOnce();
    ASSERT_EQ(sd.events().size(), 1u);
    EXPECT_EQ(sd.events()[0].event, "accepted");
    sd.Stop();

    std::lock_guard lock(mu);
    ASSERT_GT(bodies.size(), 4u);
    const std::string hex_secret = ToHex(AsBytes(secret));
    for (const auto& b : bodies) {
      EXPECT_EQ(b.find("real-name"), std::string::npos) << b.substr(0, 200);
      EXPECT_EQ(b.find(secret), std::string::npos);
      EXPECT_EQ(b.find(hex_secret), std::string::npos);
      EXPECT_EQ(b.find("beta"), std::string::npos);
    }
  }
  HttpClient::SetGlobalTap(nullptr);
}

}  // namespace
}  // namespace signcast::nodes
