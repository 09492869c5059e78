#pragma once

// Pairing groups G1 x G2 -> GT of prime order p, written multiplicatively.
//
// Elements are plain values tagged with their curve profile; combining
// elements of different profiles throws GroupMismatchError, and G1/G2/GT are
// distinct C++ types so cross-group misuse does not compile.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "signcast/crypto/bytes.hpp"
#include "signcast/crypto/detail/profiles.hpp"
#include "signcast/crypto/hash.hpp"
#include "signcast/crypto/rng.hpp"

namespace signcast::crypto {

enum class CurveProfile : std::uint8_t {
  kSymmetric512 = 0,   // SS512 supersingular curve, G1 = G2
  kAsymmetric159 = 1,  // MNT159, G1 != G2
};

std::string_view ToString(CurveProfile profile);
// Accepts "SS512"/"SYMMETRIC_512" and "MNT159"/"ASYMMETRIC_159", any case.
CurveProfile ParseCurveProfile(std::string_view text);
// Wire tag of a profile; throws DecodeError for an unknown byte.
CurveProfile CurveProfileFromByte(std::uint8_t tag);

// Integer modulo the group order p; always reduced.
class Scalar {
 public:
  Scalar() = default;
  Scalar(CurveProfile profile, const mpz_class& value);
  static Scalar FromU64(CurveProfile profile, std::uint64_t value);

  CurveProfile profile() const { return profile_; }
  const mpz_class& value() const { return value_; }
  bool IsZero() const { return value_ == 0; }

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar operator-() const;
  // Throws ArgumentError for zero.
  Scalar Inverse() const;

  Bytes ToBytes() const;
  std::string ToDecimal() const { return value_.get_str(10); }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.profile_ == b.profile_ && a.value_ == b.value_;
  }

 private:
  CurveProfile profile_ = CurveProfile::kSymmetric512;
  mpz_class value_;
};

class G1 {
 public:
  using Rep = std::variant<detail::Ss512Point, detail::Mnt159G1Point>;

  G1() = default;
  explicit G1(Rep rep) : rep_(std::move(rep)) {}

  CurveProfile profile() const { return static_cast<CurveProfile>(rep_.index()); }
  const Rep& rep() const { return rep_; }

  friend G1 operator*(const G1& a, const G1& b);
  friend G1 operator/(const G1& a, const G1& b) { return a * b.Inverse(); }
  G1 Inverse() const;
  G1 Pow(const Scalar& k) const;
  bool IsIdentity() const;
  Bytes ToBytes() const;

  friend bool operator==(const G1& a, const G1& b) { return a.rep_ == b.rep_; }

 private:
  Rep rep_;
};

class G2 {
 public:
  using Rep = std::variant<detail::Ss512Point, detail::Mnt159G2Point>;

  G2() = default;
  explicit G2(Rep rep) : rep_(std::move(rep)) {}

  CurveProfile profile() const { return static_cast<CurveProfile>(rep_.index()); }
  const Rep& rep() const { return rep_; }

  friend G2 operator*(const G2& a, const G2& b);
  friend G2 operator/(const G2& a, const G2& b) { return a * b.Inverse(); }
  G2 Inverse() const;
  G2 Pow(const Scalar& k) const;
  bool IsIdentity() const;
  Bytes ToBytes() const;

  friend bool operator==(const G2& a, const G2& b) { return a.rep_ == b.rep_; }

 private:
  Rep rep_;
};

class GT {
 public:
  using Rep = std::variant<detail::Ss512Fp2, detail::Mnt159Fp6>;

  GT() : rep_(detail::Ss512Fp2::One()) {}
  explicit GT(Rep rep) : rep_(std::move(rep)) {}

  CurveProfile profile() const { return static_cast<CurveProfile>(rep_.index()); }
  const Rep& rep() const { return rep_; }

  friend GT operator*(const GT& a, const GT& b);
  friend GT operator/(const GT& a, const GT& b) { return a * b.Inverse(); }
  // Elements of GT are unitary, so the inverse is the conjugate.
  GT Inverse() const;
  GT Pow(const Scalar& k) const;
  bool IsIdentity() const;
  // Full (uncompressed) coefficient encoding.
  Bytes ToBytes() const;

  friend bool operator==(const GT& a, const GT& b) { return a.rep_ == b.rep_; }

 private:
  Rep rep_;
};

// Public description of one pairing family: order, generators, pairing,
// hashing into Z_p and canonical decoding. Instances are immutable
// process-wide singletons and safe to share across threads.
class GroupContext {
 public:
  GroupContext(const GroupContext&) = delete;
  GroupContext& operator=(const GroupContext&) = delete;

  // Throws ConfigError for a profile value outside the enum.
  static const GroupContext& Get(CurveProfile profile);

  CurveProfile profile() const { return profile_; }
  const mpz_class& order() const { return order_; }
  const G1& g1() const { return g1_; }
  const G2& g2() const { return g2_; }
  // pair(g1, g2), cached.
  const GT& gt_base() const { return gt_base_; }
  bool source_groups_coincide() const { return profile_ == CurveProfile::kSymmetric512; }

  G1 IdentityG1() const;
  G2 IdentityG2() const;
  GT IdentityGT() const;

  GT Pair(const G1& a, const G2& b) const;

  Scalar MakeScalar(const mpz_class& value) const { return Scalar(profile_, value); }
  Scalar RandomScalar(Rng& rng) const;
  Scalar RandomNonzeroScalar(Rng& rng) const;
  // H2: big-endian SHA-256(data) reduced mod p.
  Scalar HashToScalar(ByteSpan data) const;
  Scalar HashToScalar(std::string_view s) const { return HashToScalar(AsBytes(s)); }
  Scalar DigestToScalar(const Digest256& digest) const;

  // Same element seen as a member of G2; only when the source groups coincide.
  G2 AsG2(const G1& a) const;

  std::size_t g1_size() const;
  std::size_t g2_size() const;
  std::size_t gt_size() const;
  std::size_t scalar_size() const { return 20; }

  // Strict decoders: exact length, canonical field encodings, on-curve and
  // order-p subgroup membership. Throw DecodeError otherwise.
  G1 DecodeG1(ByteSpan bytes) const;
  G2 DecodeG2(ByteSpan bytes) const;
  GT DecodeGT(ByteSpan bytes) const;
  Scalar DecodeScalar(ByteSpan bytes) const;

  void CheckProfile(CurveProfile other) const;

 private:
  explicit GroupContext(CurveProfile profile);

  CurveProfile profile_;
  mpz_class order_;
  G1 g1_;
  G2 g2_;
  GT gt_base_;
};

// group_setup: deterministic context for a profile.
inline const GroupContext& GroupSetup(CurveProfile profile) { return GroupContext::Get(profile); }

}  // namespace signcast::crypto
