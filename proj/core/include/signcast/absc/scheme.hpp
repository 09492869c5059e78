#pragma once

// Ciphertext-policy attribute-based signcryption.
//
//   Setup:   alpha, beta <- Z_p*;  pk = (h = g1^beta, t = e(g1, g2)^alpha),
//            mk = (beta, g2^alpha).
//   KeyGen:  D_enc = g2^((alpha + r_enc) / beta),
//            D_j = g2^r_enc * g2^(H2(j) r_j),  D'_j = g2^r_j        (j in S)
//            key_sign = g2^((alpha + r_sign) / beta), key_ver = g2^r_sign.
//   SignCrypt: split s over the tree; C = h^s, C_y = g1^q_y(0),
//            C'_y = g1^(H2(attr(y)) q_y(0)), C~ = key_sym xor mask(t^s),
//            delta = e(C, g2)^zeta, pi = H1(msg) + H2(delta),
//            w = g1^s, psi = g2^zeta * key_sign^pi.
//   DeSignCrypt: A = DecryptNode(root) = e(g1, g2)^(r_enc s),
//            t^s = e(C, D_enc) / A, key_sym = C~ xor mask(t^s),
//            delta' = e(C, psi) / (e(w, key_ver) t^s)^pi, accept iff
//            H1(msg') + H2(delta') = pi.
//
// D'_j lives in G2 so every leaf pairing type-checks when G1 != G2; with the
// symmetric profile this is the same scheme. The mask is
// H1(ser(t^s) || H1(header)) where the header is the profile, tree, C and
// every leaf component, so none of those can be altered without changing
// the recovered key.

#include <nlohmann/json.hpp>

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "signcast/absc/symmetric.hpp"
#include "signcast/crypto/group.hpp"
#include "signcast/policy/access_tree.hpp"

namespace signcast::absc {

using crypto::CurveProfile;
using crypto::G1;
using crypto::G2;
using crypto::GT;
using crypto::GroupContext;
using crypto::Scalar;

struct PublicParams {
  CurveProfile profile = CurveProfile::kSymmetric512;
  G1 h;
  GT t;

  const GroupContext& context() const { return GroupContext::Get(profile); }

  Bytes Encode() const;
  static PublicParams Decode(ByteSpan bytes);
  nlohmann::json ToJson() const;
  static PublicParams FromJson(const nlohmann::json& j);

  friend bool operator==(const PublicParams&, const PublicParams&) = default;
};

// TA-only. Never placed on the wire or the ledger.
struct MasterKey {
  Scalar beta;
  G2 g2_alpha;

  nlohmann::json ToJson() const;
  static MasterKey FromJson(const nlohmann::json& j, const GroupContext& ctx);
};

struct AttributeKeyComponent {
  std::string attribute;
  G2 d;
  G2 d_prime;
};

struct AttributeSecretKey {
  G2 d_enc;
  std::vector<AttributeKeyComponent> components;  // sorted by attribute, unique

  policy::AttributeSet attributes() const;
  const AttributeKeyComponent* Find(const std::string& attribute) const;

  nlohmann::json ToJson() const;
  static AttributeSecretKey FromJson(const nlohmann::json& j, const GroupContext& ctx);
};

struct SigningKey {
  G2 key_sign;

  nlohmann::json ToJson() const;
  static SigningKey FromJson(const nlohmann::json& j, const GroupContext& ctx);
};

struct VerificationKey {
  G2 key_ver;

  nlohmann::json ToJson() const;
  static VerificationKey FromJson(const nlohmann::json& j, const GroupContext& ctx);
  friend bool operator==(const VerificationKey&, const VerificationKey&) = default;
};

struct IssuedKeys {
  std::optional<AttributeSecretKey> sk;
  SigningKey sign;
  VerificationKey ver;
};

struct LeafComponent {
  G1 c_y;
  G1 c_y_prime;

  friend bool operator==(const LeafComponent&, const LeafComponent&) = default;
};

struct SignedCiphertext {
  policy::AccessTree tree;
  std::array<std::uint8_t, kSymKeySize> c_tilde{};
  G1 c;
  std::vector<LeafComponent> leaves;  // one per tree leaf, in tree.leaves() order
  G1 w;
  Scalar pi;
  G2 psi;

  CurveProfile profile() const { return c.profile(); }
  friend bool operator==(const SignedCiphertext&, const SignedCiphertext&) = default;
};

struct SigncryptOutput {
  SignedCiphertext st;
  MessageCiphertext ct;
};

// Transient signcryption values, exposed for verification in tests.
struct SigncryptTranscript {
  Scalar s;
  Scalar zeta;
  GT delta;
  policy::ShareAssignment shares;
  Bytes key_sym;
};

// Intermediate designcryption values, exposed for verification in tests.
struct DesigncryptTranscript {
  std::optional<GT> a;        // DecryptNode(root)
  std::optional<GT> t_s;      // e(C, D_enc) / A
  std::optional<GT> delta_prime;
  Bytes key_sym;
  bool padding_ok = false;
  bool signature_ok = false;
};

std::pair<PublicParams, MasterKey> Setup(CurveProfile profile, Rng& rng);

// Decryption key over S; throws ArgumentError if S is empty.
AttributeSecretKey IssueAttributeKey(const PublicParams& pk, const MasterKey& mk, const policy::AttributeSet& attrs,
                                     Rng& rng);
std::pair<SigningKey, VerificationKey> IssueSigningPair(const PublicParams& pk, const MasterKey& mk, Rng& rng);
// Both of the above. With want_decryption_key and empty S, throws ArgumentError.
IssuedKeys KeyGen(const PublicParams& pk, const MasterKey& mk, const policy::AttributeSet& attrs, Rng& rng,
                  bool want_decryption_key = true);

// e(h, key_sign) == t * e(g1, key_ver).
bool CheckSigningPair(const PublicParams& pk, const SigningKey& sign, const VerificationKey& ver);

// Throws ArgumentError for an empty message.
SigncryptOutput Signcrypt(const PublicParams& pk, const SigningKey& key_sign, ByteSpan msg,
                          const policy::AccessTree& tree, Rng& rng, SigncryptTranscript* transcript = nullptr);

// e(g1, g2)^(r_enc q_x(0)) for the subtree at `node`, or nullopt when the
// key's attributes do not satisfy it.
std::optional<GT> DecryptNode(const PublicParams& pk, const SignedCiphertext& st, const AttributeSecretKey& sk,
                              std::size_t node);

// The message on success; nullopt for a non-satisfying key, a padding
// failure or a failed signature check.
std::optional<Bytes> Designcrypt(const PublicParams& pk, const SignedCiphertext& st, const MessageCiphertext& ct,
                                 const AttributeSecretKey& sk, const VerificationKey& key_ver,
                                 DesigncryptTranscript* transcript = nullptr);

// pi = (int(H1(msg)) + H2(ser(delta))) mod p.
Scalar ComputePi(const GroupContext& ctx, ByteSpan msg, const GT& delta);
// H1 over profile, tree, C and leaf components.
Digest256 HeaderDigest(const SignedCiphertext& st);
// H1(ser(t^s) || header digest).
Digest256 KeyMask(const GT& t_s, const Digest256& header);

// Identifies a publisher's key bundle (pk, key_ver) on the ledger.
Digest256 PublisherKeyDigest(const PublicParams& pk, const VerificationKey& ver);

}  // namespace signcast::absc
