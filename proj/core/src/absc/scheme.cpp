#include "signcast/absc/scheme.hpp"

#include <algorithm>

#include "signcast/detail/json_fields.hpp"
#include "signcast/errors.hpp"

namespace signcast::absc {
namespace {

using detail::RequireArray;
using detail::RequireHex;
using detail::RequireString;

const GroupContext& ContextFromJson(const nlohmann::json& j) {
  try {
    return GroupContext::Get(crypto::ParseCurveProfile(RequireString(j, "profile")));
  } catch (const ConfigError& e) {
    throw DecodeError(e.what());
  }
}

void RequireContext(const nlohmann::json& j, const GroupContext& ctx) {
  if (&ContextFromJson(j) != &ctx) throw DecodeError("key material belongs to a different curve profile");
}

std::string ProfileName(CurveProfile p) { return std::string(crypto::ToString(p)); }

Scalar AttributeHash(const GroupContext& ctx, const std::string& attribute) { return ctx.HashToScalar(attribute); }

std::size_t LeafPosition(const policy::AccessTree& tree, std::size_t node) {
  const auto& leaves = tree.leaves();
  auto it = std::lower_bound(leaves.begin(), leaves.end(), node);
  return static_cast<std::size_t>(it - leaves.begin());
}

std::optional<GT> DecryptNodeImpl(const GroupContext& ctx, const SignedCiphertext& st, const AttributeSecretKey& sk,
                                  const std::vector<char>& ok, std::size_t id) {
  const policy::AccessNode& n = st.tree.node(id);
  if (n.is_leaf()) {
    const AttributeKeyComponent* comp = sk.Find(n.attribute);
    if (comp == nullptr) return std::nullopt;
    const LeafComponent& leaf = st.leaves[LeafPosition(st.tree, id)];
    return ctx.Pair(leaf.c_y, comp->d) / ctx.Pair(leaf.c_y_prime, comp->d_prime);
  }
  std::vector<std::size_t> indices;
  std::vector<GT> values;
  for (std::size_t c : n.children) {
    if (values.size() == n.threshold) break;
    if (!ok[c]) continue;
    std::optional<GT> v = DecryptNodeImpl(ctx, st, sk, ok, c);
    if (!v) continue;
    indices.push_back(st.tree.node(c).index);
    values.push_back(std::move(*v));
  }
  if (values.size() < n.threshold) return std::nullopt;
  const std::vector<Scalar> coeffs = policy::ChildCoefficients(ctx, indices);
  GT acc = ctx.IdentityGT();
  for (std::size_t i = 0; i < values.size(); ++i) acc = acc * values[i].Pow(coeffs[i]);
  return acc;
}

void CheckShape(const SignedCiphertext& st) {
  if (st.leaves.size() != st.tree.leaf_count()) throw ArgumentError("ciphertext leaf components do not match its tree");
}

}  // namespace

// ---------------------------------------------------------------- encodings

Bytes PublicParams::Encode() const {
  ByteWriter w;
  w.PutU8(static_cast<std::uint8_t>(profile));
  w.PutRaw(h.ToBytes());
  w.PutRaw(t.ToBytes());
  return std::move(w).Take();
}

PublicParams PublicParams::Decode(ByteSpan bytes) {
  ByteReader r(bytes);
  PublicParams pk;
  pk.profile = crypto::CurveProfileFromByte(r.GetU8());
  const GroupContext& ctx = pk.context();
  pk.h = ctx.DecodeG1(r.GetRaw(ctx.g1_size()));
  pk.t = ctx.DecodeGT(r.GetRaw(ctx.gt_size()));
  r.ExpectEnd();
  if (pk.h.IsIdentity() || pk.t.IsIdentity()) throw DecodeError("public parameters contain an identity element");
  return pk;
}

nlohmann::json PublicParams::ToJson() const {
  return {{"profile", ProfileName(profile)}, {"h", ToHex(h.ToBytes())}, {"t", ToHex(t.ToBytes())}};
}

PublicParams PublicParams::FromJson(const nlohmann::json& j) {
  const GroupContext& ctx = ContextFromJson(j);
  PublicParams pk;
  pk.profile = ctx.profile();
  pk.h = ctx.DecodeG1(RequireHex(j, "h"));
  pk.t = ctx.DecodeGT(RequireHex(j, "t"));
  if (pk.h.IsIdentity() || pk.t.IsIdentity()) throw DecodeError("public parameters contain an identity element");
  return pk;
}

nlohmann::json MasterKey::ToJson() const {
  return {{"profile", ProfileName(beta.profile())},
          {"beta", ToHex(beta.ToBytes())},
          {"g2_alpha", ToHex(g2_alpha.ToBytes())}};
}

MasterKey MasterKey::FromJson(const nlohmann::json& j, const GroupContext& ctx) {
  RequireContext(j, ctx);
  MasterKey mk;
  mk.beta = ctx.DecodeScalar(RequireHex(j, "beta"));
  mk.g2_alpha = ctx.DecodeG2(RequireHex(j, "g2_alpha"));
  if (mk.beta.IsZero()) throw DecodeError("master key beta is zero");
  return mk;
}

policy::AttributeSet AttributeSecretKey::attributes() const {
  policy::AttributeSet out;
  for (const auto& c : components) out.insert(c.attribute);
  return out;
}

const AttributeKeyComponent* AttributeSecretKey::Find(const std::string& attribute) const {
  auto it = std::lower_bound(components.begin(), components.end(), attribute,
                             [](const AttributeKeyComponent& c, const std::string& a) { return c.attribute < a; });
  if (it == components.end() || it->attribute != attribute) return nullptr;
  return &*it;
}

nlohmann::json AttributeSecretKey::ToJson() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : components) {
    comps.push_back({{"attribute", c.attribute}, {"d", ToHex(c.d.ToBytes())}, {"d_prime", ToHex(c.d_prime.ToBytes())}});
  }
  return {{"profile", ProfileName(d_enc.profile())}, {"d_enc", ToHex(d_enc.ToBytes())}, {"components", comps}};
}

AttributeSecretKey AttributeSecretKey::FromJson(const nlohmann::json& j, const GroupContext& ctx) {
  RequireContext(j, ctx);
  AttributeSecretKey sk;
  sk.d_enc = ctx.DecodeG2(RequireHex(j, "d_enc"));
  for (const auto& c : RequireArray(j, "components")) {
    AttributeKeyComponent comp;
    try {
      comp.attribute = policy::NormalizeAttribute(RequireString(c, "attribute"));
    } catch (const ArgumentError& e) {
      throw DecodeError(e.what());
    }
    comp.d = ctx.DecodeG2(RequireHex(c, "d"));
    comp.d_prime = ctx.DecodeG2(RequireHex(c, "d_prime"));
    sk.components.push_back(std::move(comp));
  }
  std::sort(sk.components.begin(), sk.components.end(),
            [](const auto& a, const auto& b) { return a.attribute < b.attribute; });
  for (std::size_t i = 1; i < sk.components.size(); ++i) {
    if (sk.components[i].attribute == sk.components[i - 1].attribute) throw DecodeError("duplicate key attribute");
  }
  return sk;
}

nlohmann::json SigningKey::ToJson() const {
  return {{"profile", ProfileName(key_sign.profile())}, {"key_sign", ToHex(key_sign.ToBytes())}};
}

SigningKey SigningKey::FromJson(const nlohmann::json& j, const GroupContext& ctx) {
  RequireContext(j, ctx);
  return SigningKey{ctx.DecodeG2(RequireHex(j, "key_sign"))};
}

nlohmann::json VerificationKey::ToJson() const {
  return {{"profile", ProfileName(key_ver.profile())}, {"key_ver", ToHex(key_ver.ToBytes())}};
}

VerificationKey VerificationKey::FromJson(const nlohmann::json& j, const GroupContext& ctx) {
  RequireContext(j, ctx);
  return VerificationKey{ctx.DecodeG2(RequireHex(j, "key_ver"))};
}

// ---------------------------------------------------------------- algorithms

std::pair<PublicParams, MasterKey> Setup(CurveProfile profile, Rng& rng) {
  const GroupContext& ctx = GroupContext::Get(profile);
  const Scalar alpha = ctx.RandomNonzeroScalar(rng);
  const Scalar beta = ctx.RandomNonzeroScalar(rng);
  PublicParams pk;
  pk.profile = profile;
  pk.h = ctx.g1().Pow(beta);
  pk.t = ctx.gt_base().Pow(alpha);
  MasterKey mk{beta, ctx.g2().Pow(alpha)};
  return {std::move(pk), std::move(mk)};
}

AttributeSecretKey IssueAttributeKey(const PublicParams& pk, const MasterKey& mk, const policy::AttributeSet& attrs,
                                     Rng& rng) {
  if (attrs.empty()) throw ArgumentError("decryption key requested for an empty attribute set");
  const GroupContext& ctx = pk.context();
  const Scalar beta_inv = mk.beta.Inverse();
  const Scalar r_enc = ctx.RandomNonzeroScalar(rng);
  AttributeSecretKey sk;
  sk.d_enc = (mk.g2_alpha * ctx.g2().Pow(r_enc)).Pow(beta_inv);
  for (const std::string& raw : attrs) {
    const std::string attribute = policy::NormalizeAttribute(raw);
    const Scalar r_j = ctx.RandomNonzeroScalar(rng);
    AttributeKeyComponent comp;
    comp.attribute = attribute;
    comp.d = ctx.g2().Pow(r_enc + AttributeHash(ctx, attribute) * r_j);
    comp.d_prime = ctx.g2().Pow(r_j);
    sk.components.push_back(std::move(comp));
  }
  std::sort(sk.components.begin(), sk.components.end(),
            [](const auto& a, const auto& b) { return a.attribute < b.attribute; });
  return sk;
}

std::pair<SigningKey, VerificationKey> IssueSigningPair(const PublicParams& pk, const MasterKey& mk, Rng& rng) {
  const GroupContext& ctx = pk.context();
  const Scalar r_sign = ctx.RandomNonzeroScalar(rng);
  SigningKey sign{(mk.g2_alpha * ctx.g2().Pow(r_sign)).Pow(mk.beta.Inverse())};
  VerificationKey ver{ctx.g2().Pow(r_sign)};
  return {std::move(sign), std::move(ver)};
}

IssuedKeys KeyGen(const PublicParams& pk, const MasterKey& mk, const policy::AttributeSet& attrs, Rng& rng,
                  bool want_decryption_key) {
  IssuedKeys out;
  if (want_decryption_key) out.sk = IssueAttributeKey(pk, mk, attrs, rng);
  auto [sign, ver] = IssueSigningPair(pk, mk, rng);
  out.sign = std::move(sign);
  out.ver = std::move(ver);
  return out;
}

bool CheckSigningPair(const PublicParams& pk, const SigningKey& sign, const VerificationKey& ver) {
  const GroupContext& ctx = pk.context();
  return ctx.Pair(pk.h, sign.key_sign) == pk.t * ctx.Pair(ctx.g1(), ver.key_ver);
}

Scalar ComputePi(const GroupContext& ctx, ByteSpan msg, const GT& delta) {
  return ctx.DigestToScalar(Sha256(msg)) + ctx.HashToScalar(delta.ToBytes());
}

Digest256 HeaderDigest(const SignedCiphertext& st) {
  Sha256Hasher hasher;
  ByteWriter w;
  w.PutRaw(AsBytes("signcast/absc/header/v1"));
  w.PutU8(static_cast<std::uint8_t>(st.profile()));
  st.tree.EncodeTo(w);
  w.PutRaw(st.c.ToBytes());
  w.PutU32(static_cast<std::uint32_t>(st.leaves.size()));
  hasher.Update(w.bytes());
  for (const auto& leaf : st.leaves) {
    hasher.Update(leaf.c_y.ToBytes());
    hasher.Update(leaf.c_y_prime.ToBytes());
  }
  return hasher.Finish();
}

Digest256 KeyMask(const GT& t_s, const Digest256& header) {
  Sha256Hasher hasher;
  hasher.Update(t_s.ToBytes());
  hasher.Update(header.span());
  return hasher.Finish();
}

Digest256 PublisherKeyDigest(const PublicParams& pk, const VerificationKey& ver) {
  Sha256Hasher hasher;
  hasher.Update(AsBytes("signcast/publisher/v1"));
  hasher.Update(pk.Encode());
  hasher.Update(ver.key_ver.ToBytes());
  return hasher.Finish();
}

SigncryptOutput Signcrypt(const PublicParams& pk, const SigningKey& key_sign, ByteSpan msg,
                          const policy::AccessTree& tree, Rng& rng, SigncryptTranscript* transcript) {
  if (msg.empty()) throw ArgumentError("message is empty");
  const GroupContext& ctx = pk.context();
  ctx.CheckProfile(key_sign.key_sign.profile());

  Bytes key_sym(kSymKeySize);
  rng.Fill(key_sym);
  SigncryptOutput out;
  out.ct = SymEncrypt(key_sym, msg, rng);

  SignedCiphertext& st = out.st;
  const Scalar s = ctx.RandomNonzeroScalar(rng);
  policy::ShareAssignment shares = policy::ShareSecret(tree, s, ctx, rng);
  st.tree = tree;
  st.c = pk.h.Pow(s);
  st.leaves.reserve(tree.leaf_count());
  for (std::size_t id : tree.leaves()) {
    const Scalar& q = shares.share(id);
    LeafComponent leaf;
    leaf.c_y = ctx.g1().Pow(q);
    leaf.c_y_prime = ctx.g1().Pow(AttributeHash(ctx, tree.node(id).attribute) * q);
    st.leaves.push_back(std::move(leaf));
  }
  const Digest256 mask = KeyMask(pk.t.Pow(s), HeaderDigest(st));
  for (std::size_t i = 0; i < kSymKeySize; ++i) st.c_tilde[i] = key_sym[i] ^ mask.bytes[i];

  const Scalar zeta = ctx.RandomNonzeroScalar(rng);
  const GT delta = ctx.Pair(st.c, ctx.g2()).Pow(zeta);
  st.pi = ComputePi(ctx, msg, delta);
  st.w = ctx.g1().Pow(s);
  st.psi = ctx.g2().Pow(zeta) * key_sign.key_sign.Pow(st.pi);

  if (transcript != nullptr) {
    transcript->s = s;
    transcript->zeta = zeta;
    transcript->delta = delta;
    transcript->shares = std::move(shares);
    transcript->key_sym = key_sym;
  }
  return out;
}

std::optional<GT> DecryptNode(const PublicParams& pk, const SignedCiphertext& st, const AttributeSecretKey& sk,
                              std::size_t node) {
  const GroupContext& ctx = pk.context();
  ctx.CheckProfile(st.profile());
  ctx.CheckProfile(sk.d_enc.profile());
  CheckShape(st);
  if (node >= st.tree.nodes().size()) throw ArgumentError("node does not belong to the ciphertext tree");
  const std::vector<char> ok = policy::SatisfiedNodes(st.tree, sk.attributes());
  if (!ok[node]) return std::nullopt;
  return DecryptNodeImpl(ctx, st, sk, ok, node);
}

std::optional<Bytes> Designcrypt(const PublicParams& pk, const SignedCiphertext& st, const MessageCiphertext& ct,
                                 const AttributeSecretKey& sk, const VerificationKey& key_ver,
                                 DesigncryptTranscript* transcript) {
  const GroupContext& ctx = pk.context();
  ctx.CheckProfile(key_ver.key_ver.profile());
  DesigncryptTranscript local;
  DesigncryptTranscript& tr = transcript != nullptr ? *transcript : local;
  tr = DesigncryptTranscript{};

  tr.a = DecryptNode(pk, st, sk, st.tree.root());
  if (!tr.a) return std::nullopt;
  tr.t_s = ctx.Pair(st.c, sk.d_enc) / *tr.a;

  const Digest256 mask = KeyMask(*tr.t_s, HeaderDigest(st));
  tr.key_sym.resize(kSymKeySize);
  for (std::size_t i = 0; i < kSymKeySize; ++i) tr.key_sym[i] = st.c_tilde[i] ^ mask.bytes[i];

  Bytes msg;
  try {
    msg = SymDecrypt(tr.key_sym, ct);
  } catch (const PaddingError&) {
    return std::nullopt;
  }
  tr.padding_ok = true;

  tr.delta_prime = ctx.Pair(st.c, st.psi) / (ctx.Pair(st.w, key_ver.key_ver) * *tr.t_s).Pow(st.pi);
  tr.signature_ok = ComputePi(ctx, msg, *tr.delta_prime) == st.pi;
  if (!tr.signature_ok) return std::nullopt;
  return msg;
}

}  // namespace signcast::absc
