#include <gtest/gtest.h>

#include "random_tree.hpp"
#include "scheme_oracle.hpp"
#include "signcast/absc/codec.hpp"
#include "signcast/absc/scheme.hpp"
#include "signcast/policy/parser.hpp"

namespace signcast::absc {
namespace {

using policy::AttributeSet;
using policy::ParsePolicy;
using testing::Bn;
using testing::BnMod;

Bytes Msg(std::string_view s) { return Bytes(s.begin(), s.end()); }

struct Fixture {
  PublicParams pk;
  MasterKey mk;
  SigningKey sign;
  VerificationKey ver;
};

Fixture MakeFixture(CurveProfile profile, std::uint64_t seed) {
  SeededRng rng(seed);
  auto [pk, mk] = Setup(profile, rng);
  auto [sign, ver] = IssueSigningPair(pk, mk, rng);
  return {pk, mk, sign, ver};
}

class Scheme : public ::testing::TestWithParam<CurveProfile> {
 protected:
  const GroupContext& ctx() const { return GroupContext::Get(GetParam()); }
  BnMod order() const { return BnMod(Bn::FromMpz(ctx().order())); }
};

INSTANTIATE_TEST_SUITE_P(Profiles, Scheme,
                         ::testing::Values(CurveProfile::kSymmetric512, CurveProfile::kAsymmetric159),
                         [](const auto& info) { return std::string(crypto::ToString(info.param)); });

TEST_P(Scheme, SetupRelations) {
  const Fixture f = MakeFixture(GetParam(), 31);
  const auto& g = ctx();
  EXPECT_EQ(f.pk.h, g.g1().Pow(f.mk.beta));
  EXPECT_EQ(f.pk.t, g.Pair(g.g1(), f.mk.g2_alpha));
  EXPECT_FALSE(f.mk.beta.IsZero());
  EXPECT_FALSE(f.pk.t.IsIdentity());
  EXPECT_EQ(PublicParams::Decode(f.pk.Encode()), f.pk);
  EXPECT_EQ(PublicParams::FromJson(f.pk.ToJson()), f.pk);
  const MasterKey back = MasterKey::FromJson(f.mk.ToJson(), g);
  EXPECT_EQ(back.beta, f.mk.beta);
  EXPECT_EQ(back.g2_alpha, f.mk.g2_alpha);
}

// e(h, D_enc) / t = e(g1, g2)^r_enc =: X, and for each attribute j
// e(g1, D_j) = X * e(g1, D'_j)^H2(j), with H2 recomputed by the oracle.
TEST_P(Scheme, AttributeKeyRelations) {
  const Fixture f = MakeFixture(GetParam(), 32);
  const auto& g = ctx();
  const BnMod m = order();
  SeededRng rng(33);
  const AttributeSet attrs{"firmware", "model-x", "region:eu", "zz"};
  const AttributeSecretKey sk = IssueAttributeKey(f.pk, f.mk, attrs, rng);
  EXPECT_EQ(sk.attributes(), attrs);
  ASSERT_EQ(sk.components.size(), attrs.size());
  const GT x = g.Pair(f.pk.h, sk.d_enc) / f.pk.t;
  for (const auto& comp : sk.components) {
    const Bn h = testing::OracleH2(m, AsBytes(comp.attribute));
    const GT rhs = x * g.Pair(g.g1(), comp.d_prime).Pow(g.MakeScalar(mpz_class(h.Dec())));
    EXPECT_EQ(g.Pair(g.g1(), comp.d), rhs) << comp.attribute;
  }
  EXPECT_NE(sk.Find("model-x"), nullptr);
  EXPECT_EQ(sk.Find("model-y"), nullptr);
  for (std::size_t i = 1; i < sk.components.size(); ++i) {
    EXPECT_LT(sk.components[i - 1].attribute, sk.components[i].attribute);
  }
  const AttributeSecretKey back = AttributeSecretKey::FromJson(sk.ToJson(), g);
  EXPECT_EQ(back.d_enc, sk.d_enc);
  EXPECT_EQ(back.attributes(), attrs);
  EXPECT_THROW(IssueAttributeKey(f.pk, f.mk, {}, rng), ArgumentError);
}

TEST_P(Scheme, SigningPairRelation) {
  const Fixture f = MakeFixture(GetParam(), 34);
  const Fixture other = MakeFixture(GetParam(), 35);
  EXPECT_TRUE(CheckSigningPair(f.pk, f.sign, f.ver));
  EXPECT_FALSE(CheckSigningPair(f.pk, f.sign, other.ver));
  EXPECT_FALSE(CheckSigningPair(other.pk, f.sign, f.ver));
  SeededRng rng(36);
  const IssuedKeys keys = KeyGen(f.pk, f.mk, {"a"}, rng);
  ASSERT_TRUE(keys.sk.has_value());
  EXPECT_TRUE(CheckSigningPair(f.pk, keys.sign, keys.ver));
  EXPECT_FALSE(KeyGen(f.pk, f.mk, {}, rng, false).sk.has_value());
  EXPECT_THROW(KeyGen(f.pk, f.mk, {}, rng, true), ArgumentError);
  EXPECT_EQ(VerificationKey::FromJson(f.ver.ToJson(), ctx()), f.ver);
  EXPECT_EQ(SigningKey::FromJson(f.sign.ToJson(), ctx()).key_sign, f.sign.key_sign);
}

// Every ciphertext component against its defining relation.
TEST_P(Scheme, SigncryptTranscriptRelations) {
  const Fixture f = MakeFixture(GetParam(), 37);
  const auto& g = ctx();
  const BnMod m = order();
  SeededRng rng(38);
  const auto tree = ParsePolicy("firmware and (model-x or (a, b, c)@2)");
  const Bytes msg = Msg("update v1.2.3");
  SigncryptTranscript tr;
  const SigncryptOutput out = Signcrypt(f.pk, f.sign, msg, tree, rng, &tr);
  const SignedCiphertext& st = out.st;

  EXPECT_EQ(st.c, f.pk.h.Pow(tr.s));
  EXPECT_EQ(st.w, g.g1().Pow(tr.s));
  ASSERT_EQ(st.leaves.size(), tree.leaf_count());
  for (std::size_t i = 0; i < st.leaves.size(); ++i) {
    const auto& node = tree.node(tree.leaves()[i]);
    const Scalar q = tr.shares.share(tree.leaves()[i]);
    const Bn h = testing::OracleH2(m, AsBytes(node.attribute));
    EXPECT_EQ(st.leaves[i].c_y, g.g1().Pow(q));
    EXPECT_EQ(st.leaves[i].c_y_prime, g.g1().Pow(g.MakeScalar(mpz_class(m.Mul(h, Bn::FromBytes(q.ToBytes())).Dec()))));
  }
  EXPECT_EQ(tr.delta, g.Pair(st.c, g.g2()).Pow(tr.zeta));
  EXPECT_EQ(Bn::FromBytes(st.pi.ToBytes()), testing::OraclePi(m, msg, tr.delta));
  EXPECT_EQ(st.psi, g.g2().Pow(tr.zeta) * f.sign.key_sign.Pow(st.pi));

  const Bytes mask = testing::OracleMask(f.pk.t.Pow(tr.s), HeaderDigest(st));
  for (std::size_t i = 0; i < kSymKeySize; ++i) ASSERT_EQ(st.c_tilde[i] ^ mask[i], tr.key_sym[i]);
  EXPECT_EQ(SymDecrypt(tr.key_sym, out.ct), msg);
}

TEST_P(Scheme, HeaderDigestCoversEveryHeaderField) {
  const Fixture f = MakeFixture(GetParam(), 39);
  SeededRng rng(40);
  const auto out = Signcrypt(f.pk, f.sign, AsBytes("m"), ParsePolicy("a or b"), rng);
  const Digest256 base = HeaderDigest(out.st);
  auto changed = [&](auto mutate) {
    SignedCiphertext st = out.st;
    mutate(st);
    return HeaderDigest(st) != base;
  };
  const auto& g = ctx();
  EXPECT_TRUE(changed([&](SignedCiphertext& st) { st.tree = ParsePolicy("a and b"); }));
  EXPECT_TRUE(changed([&](SignedCiphertext& st) { st.c = st.c * g.g1(); }));
  EXPECT_TRUE(changed([&](SignedCiphertext& st) { st.leaves[0].c_y = st.leaves[0].c_y * g.g1(); }));
  EXPECT_TRUE(changed([&](SignedCiphertext& st) { st.leaves[1].c_y_prime = g.g1(); }));
  EXPECT_TRUE(changed([&](SignedCiphertext& st) { std::swap(st.leaves[0], st.leaves[1]); }));
  // Signature fields are bound by the signature check instead.
  EXPECT_FALSE(changed([&](SignedCiphertext& st) { st.w = g.g1(); }));
  EXPECT_FALSE(changed([&](SignedCiphertext& st) { st.pi = st.pi + st.pi; }));
}

TEST_P(Scheme, RoundTripOverRandomPolicies) {
  const Fixture f = MakeFixture(GetParam(), 41);
  SeededRng rng(42);
  int accepted = 0, rejected = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto tree = testing::RandomTree(rng, {.max_leaves = 6, .max_depth = 3, .universe = 6});
    AttributeSet attrs = testing::RandomAttributes(rng, {.universe = 6});
    if (attrs.empty()) attrs.insert("a0");
    const AttributeSecretKey sk = IssueAttributeKey(f.pk, f.mk, attrs, rng);
    Bytes msg(1 + rng.Uniform(300));
    rng.Fill(msg);
    const auto out = Signcrypt(f.pk, f.sign, msg, tree, rng);
    const bool sat = policy::Satisfies(tree, attrs).satisfied;
    DesigncryptTranscript tr;
    const auto got = Designcrypt(f.pk, out.st, out.ct, sk, f.ver, &tr);
    if (sat) {
      ASSERT_TRUE(got.has_value()) << tree.ToString();
      EXPECT_EQ(*got, msg);
      EXPECT_TRUE(tr.padding_ok && tr.signature_ok);
      ++accepted;
    } else {
      EXPECT_FALSE(got.has_value());
      EXPECT_FALSE(tr.a.has_value());
      EXPECT_FALSE(DecryptNode(f.pk, out.st, sk, out.st.tree.root()).has_value());
      ++rejected;
    }
  }
  EXPECT_GT(accepted, 0);
  EXPECT_GT(rejected, 0);
}

TEST_P(Scheme, WrongVerificationKeyFailsOnlyTheSignature) {
  const Fixture f = MakeFixture(GetParam(), 43);
  SeededRng rng(45);
  const AttributeSecretKey sk = IssueAttributeKey(f.pk, f.mk, {"a"}, rng);
  auto [wrong_sign, wrong_ver] = IssueSigningPair(f.pk, f.mk, rng);
  (void)wrong_sign;
  const auto out = Signcrypt(f.pk, f.sign, AsBytes("msg"), ParsePolicy("a"), rng);
  DesigncryptTranscript tr;
  EXPECT_FALSE(Designcrypt(f.pk, out.st, out.ct, sk, wrong_ver, &tr).has_value());
  EXPECT_TRUE(tr.padding_ok);
  EXPECT_FALSE(tr.signature_ok);
  EXPECT_EQ(Designcrypt(f.pk, out.st, out.ct, sk, f.ver), Msg("msg"));
}

TEST_P(Scheme, InputErrors) {
  const Fixture f = MakeFixture(GetParam(), 46);
  SeededRng rng(47);
  EXPECT_THROW(Signcrypt(f.pk, f.sign, {}, ParsePolicy("a"), rng), ArgumentError);
  const CurveProfile other =
      GetParam() == CurveProfile::kSymmetric512 ? CurveProfile::kAsymmetric159 : CurveProfile::kSymmetric512;
  const Fixture g = MakeFixture(other, 48);
  EXPECT_THROW(Signcrypt(f.pk, g.sign, AsBytes("m"), ParsePolicy("a"), rng), GroupMismatchError);
}

// Raising or lowering a gate threshold in transit (keeping the key
// satisfying) must not yield an accepted message.
TEST_P(Scheme, ThresholdEditsAreRejected) {
  const Fixture f = MakeFixture(GetParam(), 49);
  SeededRng rng(50);
  const AttributeSecretKey sk = IssueAttributeKey(f.pk, f.mk, {"a", "b", "c"}, rng);
  const Bytes msg = Msg("threshold");
  {
    const auto out = Signcrypt(f.pk, f.sign, msg, ParsePolicy("(a, b, c)@1"), rng);
    SignedCiphertext st = out.st;
    st.tree = ParsePolicy("(a, b, c)@3");
    EXPECT_FALSE(Designcrypt(f.pk, st, out.ct, sk, f.ver).has_value());
    st.tree = ParsePolicy("(a, b, c)@2");
    EXPECT_FALSE(Designcrypt(f.pk, st, out.ct, sk, f.ver).has_value());
  }
  {
    const auto out = Signcrypt(f.pk, f.sign, msg, ParsePolicy("(a, b, c)@3"), rng);
    SignedCiphertext st = out.st;
    st.tree = ParsePolicy("(a, b, c)@2");
    EXPECT_FALSE(Designcrypt(f.pk, st, out.ct, sk, f.ver).has_value());
    EXPECT_EQ(Designcrypt(f.pk, out.st, out.ct, sk, f.ver), msg);
  }
}

TEST_P(Scheme, CodecRoundTripsAndLayout) {
  const Fixture f = MakeFixture(GetParam(), 51);
  SeededRng rng(52);
  const auto out = Signcrypt(f.pk, f.sign, AsBytes("layout check"), ParsePolicy("x and (y or z)"), rng);
  const Bytes enc = EncodeSignedCiphertext(out.st);
  ByteReader r(enc);
  EXPECT_EQ(DecodeSignedCiphertext(r), out.st);
  r.ExpectEnd();
  EXPECT_EQ(SignedCiphertextFromJson(SignedCiphertextToJson(out.st)), out.st);

  const Bytes payload = EncodePayload(out.st, out.ct);
  const auto [st2, ct2] = DecodePayload(payload);
  EXPECT_EQ(st2, out.st);
  EXPECT_EQ(ct2, out.ct);

  // Ranges tile the payload and each holds its component's bytes.
  const auto layout = DescribePayload(out.st, out.ct);
  std::size_t off = 0;
  std::map<std::string, Bytes> slice;
  for (const auto& range : layout.ranges) {
    EXPECT_EQ(range.offset, off) << range.name;
    off += range.length;
    slice[range.name] = Bytes(payload.begin() + range.offset, payload.begin() + range.offset + range.length);
  }
  EXPECT_EQ(off, payload.size());
  EXPECT_EQ(slice["profile"], Bytes{static_cast<std::uint8_t>(GetParam())});
  EXPECT_EQ(slice["policy"], out.st.tree.Encode());
  EXPECT_EQ(slice["c"], out.st.c.ToBytes());
  EXPECT_EQ(slice["c_y[1]"], out.st.leaves[1].c_y.ToBytes());
  EXPECT_EQ(slice["c_y_prime[2]"], out.st.leaves[2].c_y_prime.ToBytes());
  EXPECT_EQ(slice["w"], out.st.w.ToBytes());
  EXPECT_EQ(slice["pi"], out.st.pi.ToBytes());
  EXPECT_EQ(slice["psi"], out.st.psi.ToBytes());
  EXPECT_EQ(slice["body"], out.ct.body);
  EXPECT_EQ(Bytes(slice["c_tilde"]), Bytes(out.st.c_tilde.begin(), out.st.c_tilde.end()));

  for (std::size_t cut = 0; cut < payload.size(); cut += 7) {
    EXPECT_THROW(DecodePayload(ByteSpan(payload).first(cut)), DecodeError) << cut;
  }
  Bytes trailing = payload;
  trailing.push_back(0);
  EXPECT_THROW(DecodePayload(trailing), DecodeError);
}

// One flip per component: the payload either fails to decode or fails
// designcryption. Exhaustive coverage lives in the acceptance suite.
TEST_P(Scheme, ComponentTamperSamplesAreRejected) {
  const Fixture f = MakeFixture(GetParam(), 53);
  SeededRng rng(54);
  const AttributeSecretKey sk = IssueAttributeKey(f.pk, f.mk, {"x", "y"}, rng);
  const auto out = Signcrypt(f.pk, f.sign, AsBytes("tamper me"), ParsePolicy("x and (y or z)"), rng);
  const Bytes payload = EncodePayload(out.st, out.ct);
  for (const auto& range : DescribePayload(out.st, out.ct).ranges) {
    Bytes bad = payload;
    bad[range.offset + range.length / 2] ^= 0x10;
    bool rejected = false;
    try {
      const auto [st, ct] = DecodePayload(bad);
      rejected = !Designcrypt(f.pk, st, ct, sk, f.ver).has_value();
    } catch (const DecodeError&) {
      rejected = true;
    } catch (const ArgumentError&) {
      rejected = true;
    }
    EXPECT_TRUE(rejected) << range.name;
  }
}

TEST(SchemeFrozen, PublisherDigestDependsOnBothKeys) {
  const Fixture a = MakeFixture(CurveProfile::kAsymmetric159, 60);
  const Fixture b = MakeFixture(CurveProfile::kAsymmetric159, 61);
  EXPECT_EQ(PublisherKeyDigest(a.pk, a.ver), PublisherKeyDigest(a.pk, a.ver));
  EXPECT_NE(PublisherKeyDigest(a.pk, a.ver), PublisherKeyDigest(a.pk, b.ver));
  EXPECT_NE(PublisherKeyDigest(a.pk, a.ver), PublisherKeyDigest(b.pk, a.ver));
}

}  // namespace
}  // namespace signcast::absc
