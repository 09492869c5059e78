#include <gtest/gtest.h>

#include <functional>

#include "lagrange_oracle.hpp"
#include "random_tree.hpp"
#include "signcast/policy/access_tree.hpp"
#include "signcast/policy/parser.hpp"

namespace signcast::policy {
namespace {

using crypto::CurveProfile;
using crypto::GroupContext;
using crypto::Scalar;
using testing::Bn;
using testing::BnMod;
using testing::OracleLagrange;
using testing::OracleSatisfied;

std::size_t ErrorPosition(std::string_view text) {
  try {
    ParsePolicy(text);
  } catch (const PolicyParseError& e) {
    return e.position();
  }
  ADD_FAILURE() << "parsed: " << text;
  return SIZE_MAX;
}

TEST(Parser, SimpleForms) {
  const AccessTree leaf = ParsePolicy("firmware");
  ASSERT_EQ(leaf.nodes().size(), 1u);
  EXPECT_TRUE(leaf.node(0).is_leaf());
  EXPECT_EQ(leaf.node(0).attribute, "firmware");

  const AccessTree a = ParsePolicy("a and b and c");
  EXPECT_EQ(a.node(0).threshold, 3u);
  EXPECT_EQ(a.leaf_count(), 3u);

  const AccessTree o = ParsePolicy("a or b");
  EXPECT_EQ(o.node(0).threshold, 1u);
  EXPECT_EQ(o.node(0).num_children(), 2u);

  const AccessTree g = ParsePolicy("(a, b, c, d)@3");
  EXPECT_EQ(g.node(0).threshold, 3u);
  EXPECT_EQ(g.node(0).num_children(), 4u);
}

TEST(Parser, AndBindsTighterThanOr) {
  const AccessTree t = ParsePolicy("a or b and c");
  ASSERT_EQ(t.node(0).threshold, 1u);
  ASSERT_EQ(t.node(0).num_children(), 2u);
  const AccessNode& right = t.node(t.node(0).children[1]);
  EXPECT_EQ(right.threshold, 2u);
  EXPECT_EQ(ParsePolicy("a or (b and c)"), t);
  EXPECT_NE(ParsePolicy("(a or b) and c"), t);
}

TEST(Parser, IndicesAreOneBasedChildPositions) {
  const AccessTree t = ParsePolicy("(x, (y or z), w)@2");
  const auto& root = t.node(0);
  for (std::size_t i = 0; i < root.children.size(); ++i) {
    EXPECT_EQ(t.node(root.children[i]).index, i + 1);
    EXPECT_EQ(t.node(root.children[i]).parent, 0u);
  }
  EXPECT_EQ(t.leaf_count(), 4u);
  EXPECT_EQ(t.depth(), 3u);
  std::vector<std::string> order;
  for (std::size_t id : t.leaves()) order.push_back(t.node(id).attribute);
  EXPECT_EQ(order, (std::vector<std::string>{"x", "y", "z", "w"}));
}

TEST(Parser, ErrorsCarryPositions) {
  EXPECT_EQ(ErrorPosition(""), 0u);
  EXPECT_EQ(ErrorPosition("a and"), 5u);
  EXPECT_EQ(ErrorPosition("a b"), 2u);
  EXPECT_EQ(ErrorPosition("(a, b"), 5u);
  EXPECT_EQ(ErrorPosition("(a, b)"), 6u);
  EXPECT_EQ(ErrorPosition("(a, b)@3"), 7u);
  EXPECT_EQ(ErrorPosition("(a, b)@0"), 7u);
  EXPECT_EQ(ErrorPosition("(a, b)@x"), 7u);
  EXPECT_EQ(ErrorPosition("and"), 0u);
  EXPECT_EQ(ErrorPosition("a or or"), 5u);
  EXPECT_EQ(ErrorPosition(")"), 0u);
  EXPECT_THROW(ParsePolicy("a ,b"), PolicyParseError);
}

TEST(Parser, KeywordsAreCaseSensitiveAndNeedSpacing) {
  // "AND" is an ordinary attribute name.
  EXPECT_THROW(ParsePolicy("a AND b"), PolicyParseError);
  EXPECT_EQ(ParsePolicy("android").node(0).attribute, "android");
  EXPECT_EQ(ParsePolicy("order").node(0).attribute, "order");
  EXPECT_EQ(ParsePolicy("(a)and(b)").leaf_count(), 2u);
}

TEST(Parser, ParenthesesAroundSingleChildCollapse) {
  EXPECT_EQ(ParsePolicy("((a))"), ParsePolicy("a"));
  EXPECT_EQ(ParsePolicy("(a)@1").node(0).threshold, 1u);
  EXPECT_FALSE(ParsePolicy("(a)@1").node(0).is_leaf());
}

TEST(Attributes, Normalization) {
  EXPECT_EQ(NormalizeAttribute("  model-x\t"), "model-x");
  EXPECT_THROW(NormalizeAttribute("   "), ArgumentError);
  EXPECT_THROW(NormalizeAttribute("a b"), ArgumentError);
  for (const char* bad : {"a(b", "a)", "a,b", "a@b", "and", "or"}) {
    EXPECT_THROW(NormalizeAttribute(bad), ArgumentError) << bad;
  }
  EXPECT_EQ(MakeAttributeSet({" x", "y ", "x"}), (AttributeSet{"x", "y"}));
}

TEST(Limits, DepthAndLeafCount) {
  AccessTree t = AccessTree::Leaf("a");
  for (std::size_t d = 1; d < kMaxDepth; ++d) t = AccessTree::Or({t, AccessTree::Leaf("b")});
  EXPECT_EQ(t.depth(), kMaxDepth);
  EXPECT_THROW(AccessTree::Or({t, AccessTree::Leaf("c")}), ArgumentError);

  std::vector<AccessTree> many;
  for (std::size_t i = 0; i < kMaxLeaves; ++i) many.push_back(AccessTree::Leaf("x" + std::to_string(i)));
  EXPECT_EQ(AccessTree::Or(many).leaf_count(), kMaxLeaves);
  many.push_back(AccessTree::Leaf("extra"));
  EXPECT_THROW(AccessTree::Or(many), ArgumentError);

  std::string deep;
  for (std::size_t i = 0; i < 40; ++i) deep += "(";
  deep += "a";
  for (std::size_t i = 0; i < 40; ++i) deep += ")";
  EXPECT_THROW(ParsePolicy(deep), PolicyParseError);
  EXPECT_THROW(AccessTree::Gate(0, {AccessTree::Leaf("a")}), ArgumentError);
  EXPECT_THROW(AccessTree::Gate(2, {AccessTree::Leaf("a")}), ArgumentError);
  EXPECT_THROW(AccessTree::Gate(1, {}), ArgumentError);
}

TEST(Serialization, RandomTreesRoundTripThroughAllForms) {
  SeededRng rng(21);
  for (int i = 0; i < 300; ++i) {
    const AccessTree t = testing::RandomTree(rng, {.max_leaves = 12, .max_depth = 5});
    ASSERT_EQ(ParsePolicy(t.ToString()), t) << t.ToString();
    ASSERT_EQ(AccessTree::FromJson(t.ToJson()), t);
    const Bytes enc = t.Encode();
    ByteReader r(enc);
    ASSERT_EQ(AccessTree::Decode(r), t);
    r.ExpectEnd();
  }
}

TEST(Serialization, DecodersRejectMalformedInput) {
  const Bytes enc = ParsePolicy("(a, b, c)@2").Encode();
  for (std::size_t cut = 0; cut < enc.size(); ++cut) {
    ByteReader r(ByteSpan(enc).first(cut));
    EXPECT_THROW(AccessTree::Decode(r), DecodeError) << cut;
  }
  Bytes bad_tag = enc;
  bad_tag[0] = 0x7f;
  ByteReader r(bad_tag);
  EXPECT_THROW(AccessTree::Decode(r), DecodeError);

  EXPECT_THROW(AccessTree::FromJson(nlohmann::json::object()), DecodeError);
  EXPECT_THROW(AccessTree::FromJson({{"kind", "leaf"}}), DecodeError);
  EXPECT_THROW(AccessTree::FromJson({{"kind", "gate"}, {"k", 3}, {"children", {{{"kind", "leaf"}, {"attribute", "a"}}}}}),
               DecodeError);
  EXPECT_THROW(AccessTree::FromJson({{"kind", "leaf"}, {"attribute", "a b"}}), DecodeError);
}

TEST(Satisfaction, MatchesRecursiveOracle) {
  SeededRng rng(22);
  int satisfied = 0;
  for (int i = 0; i < 2000; ++i) {
    const AccessTree t = testing::RandomTree(rng);
    const AttributeSet attrs = testing::RandomAttributes(rng);
    const SatisfyResult res = Satisfies(t, attrs);
    ASSERT_EQ(res.satisfied, OracleSatisfied(t, t.root(), attrs)) << t.ToString();
    if (!res.satisfied) {
      EXPECT_TRUE(res.chosen.empty());
      continue;
    }
    ++satisfied;
    // Each chosen set has exactly k satisfied children, smallest indices first.
    for (const auto& [id, picked] : res.chosen) {
      const AccessNode& n = t.node(id);
      ASSERT_EQ(picked.size(), n.threshold);
      std::vector<std::size_t> expected;
      for (std::size_t c : n.children) {
        if (expected.size() < n.threshold && OracleSatisfied(t, c, attrs)) expected.push_back(t.node(c).index);
      }
      EXPECT_EQ(picked, expected);
    }
  }
  EXPECT_GT(satisfied, 200);
  EXPECT_LT(satisfied, 1800);
}

TEST(Satisfaction, WorkedExamples) {
  const AccessTree t = ParsePolicy("firmware and (model-x or model-y)");
  EXPECT_TRUE(Satisfies(t, {"firmware", "model-x"}).satisfied);
  EXPECT_TRUE(Satisfies(t, {"firmware", "model-y", "other"}).satisfied);
  EXPECT_FALSE(Satisfies(t, {"firmware"}).satisfied);
  EXPECT_FALSE(Satisfies(t, {"model-x", "model-y"}).satisfied);
  const AccessTree g = ParsePolicy("(a, b, c)@2");
  EXPECT_FALSE(Satisfies(g, {"c"}).satisfied);
  const auto r = Satisfies(g, {"a", "c", "b"});
  EXPECT_EQ(r.chosen.at(0), (std::vector<std::size_t>{1, 2}));
}

class PolicyCrypto : public ::testing::TestWithParam<CurveProfile> {};
INSTANTIATE_TEST_SUITE_P(Profiles, PolicyCrypto,
                         ::testing::Values(CurveProfile::kSymmetric512, CurveProfile::kAsymmetric159),
                         [](const auto& info) { return std::string(crypto::ToString(info.param)); });

TEST_P(PolicyCrypto, LagrangeMatchesOracle) {
  const auto& g = GroupContext::Get(GetParam());
  BnMod m(Bn::FromMpz(g.order()));
  SeededRng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.Uniform(10);
    std::vector<std::uint64_t> set;
    while (set.size() < n) {
      const std::uint64_t v = 1 + rng.Uniform(40);
      if (std::find(set.begin(), set.end(), v) == set.end()) set.push_back(v);
    }
    std::vector<std::size_t> idx(set.begin(), set.end());
    const auto coeffs = ChildCoefficients(g, idx);
    Bn sum = Bn::FromU64(0);
    for (std::size_t a = 0; a < n; ++a) {
      const Bn expected = OracleLagrange(m, set[a], set);
      ASSERT_EQ(Bn::FromBytes(coeffs[a].ToBytes()), expected);
      sum = m.Add(sum, expected);
    }
    // Interpolating the constant polynomial 1 gives 1.
    EXPECT_EQ(sum, Bn::FromU64(1));
  }
  const Scalar one = Scalar::FromU64(GetParam(), 1), two = Scalar::FromU64(GetParam(), 2);
  EXPECT_THROW(LagrangeCoefficient(one, {two}, one), ArgumentError);
  EXPECT_THROW(LagrangeCoefficient(one, {one, one}, one), ArgumentError);
  const CurveProfile other =
      GetParam() == CurveProfile::kSymmetric512 ? CurveProfile::kAsymmetric159 : CurveProfile::kSymmetric512;
  EXPECT_THROW(LagrangeCoefficient(one, {one, Scalar::FromU64(other, 2)}, one), GroupMismatchError);
}

// Shares of a satisfied tree reconstruct the secret under the oracle's own
// choice of child sets; any k children of a gate recover the gate's share.
TEST_P(PolicyCrypto, SharesReconstructTheSecret) {
  const auto& g = GroupContext::Get(GetParam());
  BnMod m(Bn::FromMpz(g.order()));
  SeededRng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const AccessTree t = testing::RandomTree(rng, {.max_leaves = 10, .max_depth = 4});
    const Scalar s = g.RandomScalar(rng);
    const ShareAssignment shares = ShareSecret(t, s, g, rng);
    ASSERT_EQ(shares.node_share.size(), t.nodes().size());
    ASSERT_EQ(shares.share(t.root()), s);

    std::function<Bn(std::size_t)> recover = [&](std::size_t id) -> Bn {
      const AccessNode& n = t.node(id);
      if (n.is_leaf()) return Bn::FromBytes(shares.share(id).ToBytes());
      // Random k-subset of children.
      std::vector<std::size_t> kids = n.children;
      for (std::size_t i = kids.size(); i > 1; --i) std::swap(kids[i - 1], kids[rng.Uniform(i)]);
      kids.resize(n.threshold);
      std::vector<std::uint64_t> set;
      for (std::size_t c : kids) set.push_back(t.node(c).index);
      Bn acc = Bn::FromU64(0);
      for (std::size_t c : kids) acc = m.Add(acc, m.Mul(recover(c), OracleLagrange(m, t.node(c).index, set)));
      return acc;
    };
    ASSERT_EQ(recover(t.root()), Bn::FromBytes(s.ToBytes())) << t.ToString();
  }
}

TEST_P(PolicyCrypto, ThresholdMinusOneSharesRevealNothingStructural) {
  // With k - 1 children, the interpolated value differs from the secret for
  // a fresh random polynomial (it would match only by chance 1/p).
  const auto& g = GroupContext::Get(GetParam());
  BnMod m(Bn::FromMpz(g.order()));
  SeededRng rng(25);
  const AccessTree t = ParsePolicy("(a, b, c, d, e)@3");
  for (int trial = 0; trial < 20; ++trial) {
    const Scalar s = g.RandomScalar(rng);
    const ShareAssignment shares = ShareSecret(t, s, g, rng);
    const std::vector<std::uint64_t> set{1, 2};
    Bn acc = Bn::FromU64(0);
    for (std::uint64_t i : set) {
      acc = m.Add(acc, m.Mul(Bn::FromBytes(shares.share(t.node(0).children[i - 1]).ToBytes()), OracleLagrange(m, i, set)));
    }
    EXPECT_FALSE(acc == Bn::FromBytes(s.ToBytes()));
  }
}

}  // namespace
}  // namespace signcast::policy
