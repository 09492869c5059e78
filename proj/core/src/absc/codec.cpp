#include "signcast/absc/codec.hpp"

#include <algorithm>
#include <string>

#include "signcast/detail/json_fields.hpp"
#include "signcast/errors.hpp"

namespace signcast::absc {
namespace {

constexpr std::size_t kMaxPolicyBytes = 1 << 20;

using detail::RequireArray;
using detail::RequireField;
using detail::RequireHex;
using detail::RequireString;

}  // namespace

void EncodeSignedCiphertext(const SignedCiphertext& st, ByteWriter& w) {
  w.PutU8(static_cast<std::uint8_t>(st.profile()));
  w.PutBlob(st.tree.Encode());
  w.PutRaw(st.c_tilde);
  w.PutRaw(st.c.ToBytes());
  w.PutU32(static_cast<std::uint32_t>(st.leaves.size()));
  for (const auto& leaf : st.leaves) {
    w.PutRaw(leaf.c_y.ToBytes());
    w.PutRaw(leaf.c_y_prime.ToBytes());
  }
  w.PutRaw(st.w.ToBytes());
  w.PutRaw(st.pi.ToBytes());
  w.PutRaw(st.psi.ToBytes());
}

Bytes EncodeSignedCiphertext(const SignedCiphertext& st) {
  ByteWriter w;
  EncodeSignedCiphertext(st, w);
  return std::move(w).Take();
}

SignedCiphertext DecodeSignedCiphertext(ByteReader& r) {
  const GroupContext& ctx = GroupContext::Get(crypto::CurveProfileFromByte(r.GetU8()));
  SignedCiphertext st;
  ByteReader policy_reader(r.GetBlob(kMaxPolicyBytes));
  st.tree = policy::AccessTree::Decode(policy_reader);
  policy_reader.ExpectEnd();
  ByteSpan c_tilde = r.GetRaw(kSymKeySize);
  std::copy(c_tilde.begin(), c_tilde.end(), st.c_tilde.begin());
  st.c = ctx.DecodeG1(r.GetRaw(ctx.g1_size()));
  const std::uint32_t n = r.GetU32();
  if (n != st.tree.leaf_count()) throw DecodeError("leaf component count does not match the policy");
  st.leaves.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    LeafComponent leaf;
    leaf.c_y = ctx.DecodeG1(r.GetRaw(ctx.g1_size()));
    leaf.c_y_prime = ctx.DecodeG1(r.GetRaw(ctx.g1_size()));
    st.leaves.push_back(std::move(leaf));
  }
  st.w = ctx.DecodeG1(r.GetRaw(ctx.g1_size()));
  st.pi = ctx.DecodeScalar(r.GetRaw(ctx.scalar_size()));
  st.psi = ctx.DecodeG2(r.GetRaw(ctx.g2_size()));
  return st;
}

nlohmann::json SignedCiphertextToJson(const SignedCiphertext& st) {
  nlohmann::json leaves = nlohmann::json::array();
  for (std::size_t i = 0; i < st.leaves.size(); ++i) {
    leaves.push_back({{"attr", st.tree.node(st.tree.leaves()[i]).attribute},
                      {"c_y", ToHex(st.leaves[i].c_y.ToBytes())},
                      {"c_y_prime", ToHex(st.leaves[i].c_y_prime.ToBytes())}});
  }
  return {{"profile", std::string(crypto::ToString(st.profile()))},
          {"policy", st.tree.ToJson()},
          {"c_tilde", ToHex(st.c_tilde)},
          {"c", ToHex(st.c.ToBytes())},
          {"leaves", std::move(leaves)},
          {"w", ToHex(st.w.ToBytes())},
          {"pi", st.pi.ToDecimal()},
          {"psi", ToHex(st.psi.ToBytes())}};
}

SignedCiphertext SignedCiphertextFromJson(const nlohmann::json& j) {
  CurveProfile profile;
  try {
    profile = crypto::ParseCurveProfile(RequireString(j, "profile"));
  } catch (const ConfigError& e) {
    throw DecodeError(e.what());
  }
  const GroupContext& ctx = GroupContext::Get(profile);
  SignedCiphertext st;
  st.tree = policy::AccessTree::FromJson(RequireField(j, "policy"));
  Bytes c_tilde = RequireHex(j, "c_tilde");
  if (c_tilde.size() != kSymKeySize) throw DecodeError("c_tilde must be 32 bytes");
  std::copy(c_tilde.begin(), c_tilde.end(), st.c_tilde.begin());
  st.c = ctx.DecodeG1(RequireHex(j, "c"));
  const auto& leaves = RequireArray(j, "leaves");
  if (leaves.size() != st.tree.leaf_count()) throw DecodeError("leaf component count does not match the policy");
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (RequireString(leaves[i], "attr") != st.tree.node(st.tree.leaves()[i]).attribute) {
      throw DecodeError("leaf component attribute does not match the policy");
    }
    LeafComponent leaf;
    leaf.c_y = ctx.DecodeG1(RequireHex(leaves[i], "c_y"));
    leaf.c_y_prime = ctx.DecodeG1(RequireHex(leaves[i], "c_y_prime"));
    st.leaves.push_back(std::move(leaf));
  }
  st.w = ctx.DecodeG1(RequireHex(j, "w"));
  const std::string pi = RequireString(j, "pi");
  if (pi.empty() || pi.size() > 60 || !std::all_of(pi.begin(), pi.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      (pi.size() > 1 && pi[0] == '0')) {
    throw DecodeError("pi must be a canonical decimal string");
  }
  mpz_class value(pi, 10);
  if (value >= ctx.order()) throw DecodeError("pi not reduced mod p");
  st.pi = ctx.MakeScalar(value);
  st.psi = ctx.DecodeG2(RequireHex(j, "psi"));
  return st;
}

Bytes EncodePayload(const SignedCiphertext& st, const MessageCiphertext& ct) {
  ByteWriter w;
  EncodeSignedCiphertext(st, w);
  ct.EncodeTo(w);
  return std::move(w).Take();
}

std::pair<SignedCiphertext, MessageCiphertext> DecodePayload(ByteSpan bytes) {
  ByteReader r(bytes);
  SignedCiphertext st = DecodeSignedCiphertext(r);
  MessageCiphertext ct = MessageCiphertext::Decode(r);
  r.ExpectEnd();
  return {std::move(st), std::move(ct)};
}

PayloadLayout DescribePayload(const SignedCiphertext& st, const MessageCiphertext& ct) {
  const GroupContext& ctx = GroupContext::Get(st.profile());
  PayloadLayout layout;
  std::size_t off = 0;
  auto add = [&](std::string name, std::size_t len) {
    layout.ranges.push_back({std::move(name), off, len});
    off += len;
  };
  add("profile", 1);
  add("policy_length", 4);
  add("policy", st.tree.Encode().size());
  add("c_tilde", kSymKeySize);
  add("c", ctx.g1_size());
  add("leaf_count", 4);
  for (std::size_t i = 0; i < st.leaves.size(); ++i) {
    add("c_y[" + std::to_string(i) + "]", ctx.g1_size());
    add("c_y_prime[" + std::to_string(i) + "]", ctx.g1_size());
  }
  add("w", ctx.g1_size());
  add("pi", ctx.scalar_size());
  add("psi", ctx.g2_size());
  add("iv", kIvSize);
  add("body_length", 4);
  add("body", ct.body.size());
  return layout;
}

}  // namespace signcast::absc
