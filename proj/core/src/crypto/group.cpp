#include "signcast/crypto/group.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <type_traits>

#include "signcast/errors.hpp"

namespace signcast::crypto {
namespace {

using detail::Mnt159;
using detail::Ss512;

const mpz_class& OrderOf(CurveProfile profile) {
  switch (profile) {
    case CurveProfile::kSymmetric512:
      return Ss512::Order();
    case CurveProfile::kAsymmetric159:
      return Mnt159::Order();
  }
  throw ConfigError("unsupported curve profile");
}

template <class Rep>
void RequireSameProfile(const Rep& a, const Rep& b) {
  if (a.index() != b.index()) throw GroupMismatchError("elements belong to different curve profiles");
}

void RequireProfile(CurveProfile element, CurveProfile scalar) {
  if (element != scalar) throw GroupMismatchError("scalar and element belong to different curve profiles");
}

template <class Rep, class F>
Rep CombineSame(const Rep& a, const Rep& b, F&& op) {
  RequireSameProfile(a, b);
  return std::visit(
      [&](const auto& lhs) -> Rep {
        using T = std::decay_t<decltype(lhs)>;
        return Rep(std::in_place_type<T>, op(lhs, std::get<T>(b)));
      },
      a);
}

template <class Rep>
Bytes EncodePoint(const Rep& rep) {
  return std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        Bytes out(T::kEncodedSize);
        p.Encode(out.data());
        return out;
      },
      rep);
}

template <class Point>
Point DecodePoint(ByteSpan bytes, const mpz_class& order, const char* what) {
  if (bytes.size() != Point::kEncodedSize) throw DecodeError(std::string(what) + ": wrong encoded length");
  auto p = Point::Decode(bytes.data());
  if (!p) throw DecodeError(std::string(what) + ": not a canonical curve point");
  if (!p->Mul(order).IsInfinity()) throw DecodeError(std::string(what) + ": point outside the order-p subgroup");
  return *p;
}

std::string Upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
  return out;
}

}  // namespace

std::string_view ToString(CurveProfile profile) {
  switch (profile) {
    case CurveProfile::kSymmetric512:
      return "SS512";
    case CurveProfile::kAsymmetric159:
      return "MNT159";
  }
  throw ConfigError("unsupported curve profile");
}

CurveProfile ParseCurveProfile(std::string_view text) {
  const std::string up = Upper(text);
  if (up == "SS512" || up == "SYMMETRIC_512") return CurveProfile::kSymmetric512;
  if (up == "MNT159" || up == "ASYMMETRIC_159") return CurveProfile::kAsymmetric159;
  throw ConfigError("unsupported curve profile: " + std::string(text));
}

CurveProfile CurveProfileFromByte(std::uint8_t tag) {
  if (tag == static_cast<std::uint8_t>(CurveProfile::kSymmetric512)) return CurveProfile::kSymmetric512;
  if (tag == static_cast<std::uint8_t>(CurveProfile::kAsymmetric159)) return CurveProfile::kAsymmetric159;
  throw DecodeError("unknown curve profile tag " + std::to_string(tag));
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(CurveProfile profile, const mpz_class& value) : profile_(profile) {
  mpz_mod(value_.get_mpz_t(), value.get_mpz_t(), OrderOf(profile).get_mpz_t());
}

Scalar Scalar::FromU64(CurveProfile profile, std::uint64_t value) {
  mpz_class v;
  mpz_import(v.get_mpz_t(), 1, 1, sizeof(value), 0, 0, &value);
  return Scalar(profile, v);
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  RequireProfile(a.profile_, b.profile_);
  return Scalar(a.profile_, a.value_ + b.value_);
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  RequireProfile(a.profile_, b.profile_);
  return Scalar(a.profile_, a.value_ - b.value_);
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  RequireProfile(a.profile_, b.profile_);
  return Scalar(a.profile_, a.value_ * b.value_);
}

Scalar Scalar::operator-() const { return Scalar(profile_, -value_); }

Scalar Scalar::Inverse() const {
  if (IsZero()) throw ArgumentError("inverse of zero scalar");
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), value_.get_mpz_t(), OrderOf(profile_).get_mpz_t());
  return Scalar(profile_, inv);
}

Bytes Scalar::ToBytes() const {
  Bytes out(20, 0);
  std::size_t need = (mpz_sizeinbase(value_.get_mpz_t(), 2) + 7) / 8;
  if (value_ != 0) {
    std::size_t count = 0;
    mpz_export(out.data() + (out.size() - need), &count, 1, 1, 1, 0, value_.get_mpz_t());
  }
  return out;
}

// ---------------------------------------------------------------- G1 / G2

G1 operator*(const G1& a, const G1& b) {
  return G1(CombineSame(a.rep_, b.rep_, [](const auto& x, const auto& y) { return x + y; }));
}

G1 G1::Inverse() const {
  return G1(std::visit([](const auto& p) -> Rep { return p.Negate(); }, rep_));
}

G1 G1::Pow(const Scalar& k) const {
  RequireProfile(profile(), k.profile());
  return G1(std::visit([&](const auto& p) -> Rep { return p.Mul(k.value()); }, rep_));
}

bool G1::IsIdentity() const {
  return std::visit([](const auto& p) { return p.IsInfinity(); }, rep_);
}

Bytes G1::ToBytes() const { return EncodePoint(rep_); }

G2 operator*(const G2& a, const G2& b) {
  return G2(CombineSame(a.rep_, b.rep_, [](const auto& x, const auto& y) { return x + y; }));
}

G2 G2::Inverse() const {
  return G2(std::visit([](const auto& p) -> Rep { return p.Negate(); }, rep_));
}

G2 G2::Pow(const Scalar& k) const {
  RequireProfile(profile(), k.profile());
  return G2(std::visit([&](const auto& p) -> Rep { return p.Mul(k.value()); }, rep_));
}

bool G2::IsIdentity() const {
  return std::visit([](const auto& p) { return p.IsInfinity(); }, rep_);
}

Bytes G2::ToBytes() const { return EncodePoint(rep_); }

// ---------------------------------------------------------------- GT

GT operator*(const GT& a, const GT& b) {
  return GT(CombineSame(a.rep_, b.rep_, [](const auto& x, const auto& y) { return x * y; }));
}

GT GT::Inverse() const {
  return GT(std::visit([](const auto& v) -> Rep { return v.Conjugate(); }, rep_));
}

GT GT::Pow(const Scalar& k) const {
  RequireProfile(profile(), k.profile());
  return GT(std::visit([&](const auto& v) -> Rep { return v.Pow(k.value()); }, rep_));
}

bool GT::IsIdentity() const {
  return std::visit([](const auto& v) { return v.IsOne(); }, rep_);
}

Bytes GT::ToBytes() const {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        Bytes out(T::kByteSize);
        v.ToBytes(out.data());
        return out;
      },
      rep_);
}

// ---------------------------------------------------------------- context

GroupContext::GroupContext(CurveProfile profile) : profile_(profile), order_(OrderOf(profile)) {
  switch (profile) {
    case CurveProfile::kSymmetric512:
      g1_ = G1(G1::Rep(std::in_place_index<0>, Ss512::G1Generator()));
      g2_ = G2(G2::Rep(std::in_place_index<0>, Ss512::G2Generator()));
      break;
    case CurveProfile::kAsymmetric159:
      g1_ = G1(G1::Rep(std::in_place_index<1>, Mnt159::G1Generator()));
      g2_ = G2(G2::Rep(std::in_place_index<1>, Mnt159::G2Generator()));
      break;
  }
  gt_base_ = Pair(g1_, g2_);
}

const GroupContext& GroupContext::Get(CurveProfile profile) {
  switch (profile) {
    case CurveProfile::kSymmetric512: {
      static const GroupContext ss512(CurveProfile::kSymmetric512);
      return ss512;
    }
    case CurveProfile::kAsymmetric159: {
      static const GroupContext mnt159(CurveProfile::kAsymmetric159);
      return mnt159;
    }
  }
  throw ConfigError("unsupported curve profile");
}

void GroupContext::CheckProfile(CurveProfile other) const {
  if (other != profile_) throw GroupMismatchError("element does not belong to this group context");
}

G1 GroupContext::IdentityG1() const {
  if (profile_ == CurveProfile::kSymmetric512) return G1(G1::Rep(std::in_place_index<0>));
  return G1(G1::Rep(std::in_place_index<1>));
}

G2 GroupContext::IdentityG2() const {
  if (profile_ == CurveProfile::kSymmetric512) return G2(G2::Rep(std::in_place_index<0>));
  return G2(G2::Rep(std::in_place_index<1>));
}

GT GroupContext::IdentityGT() const {
  if (profile_ == CurveProfile::kSymmetric512) return GT(GT::Rep(std::in_place_index<0>, detail::Ss512Fp2::One()));
  return GT(GT::Rep(std::in_place_index<1>, detail::Mnt159Fp6::One()));
}

GT GroupContext::Pair(const G1& a, const G2& b) const {
  CheckProfile(a.profile());
  CheckProfile(b.profile());
  if (profile_ == CurveProfile::kSymmetric512) {
    return GT(GT::Rep(std::in_place_index<0>, Ss512::Pair(std::get<0>(a.rep()), std::get<0>(b.rep()))));
  }
  return GT(GT::Rep(std::in_place_index<1>, Mnt159::Pair(std::get<1>(a.rep()), std::get<1>(b.rep()))));
}

Scalar GroupContext::RandomScalar(Rng& rng) const {
  // 512 random bits reduced mod p: bias below 2^-350.
  std::array<std::uint8_t, 64> buf{};
  rng.Fill(buf);
  mpz_class v;
  mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
  return Scalar(profile_, v);
}

Scalar GroupContext::RandomNonzeroScalar(Rng& rng) const {
  for (;;) {
    Scalar s = RandomScalar(rng);
    if (!s.IsZero()) return s;
  }
}

Scalar GroupContext::DigestToScalar(const Digest256& digest) const {
  mpz_class v;
  mpz_import(v.get_mpz_t(), digest.bytes.size(), 1, 1, 1, 0, digest.bytes.data());
  return Scalar(profile_, v);
}

Scalar GroupContext::HashToScalar(ByteSpan data) const { return DigestToScalar(Sha256(data)); }

G2 GroupContext::AsG2(const G1& a) const {
  CheckProfile(a.profile());
  if (!source_groups_coincide()) throw GroupMismatchError("G1 and G2 are distinct groups for this profile");
  return G2(G2::Rep(std::in_place_index<0>, std::get<0>(a.rep())));
}

std::size_t GroupContext::g1_size() const {
  return profile_ == CurveProfile::kSymmetric512 ? detail::Ss512Point::kEncodedSize
                                                 : detail::Mnt159G1Point::kEncodedSize;
}

std::size_t GroupContext::g2_size() const {
  return profile_ == CurveProfile::kSymmetric512 ? detail::Ss512Point::kEncodedSize
                                                 : detail::Mnt159G2Point::kEncodedSize;
}

std::size_t GroupContext::gt_size() const {
  return profile_ == CurveProfile::kSymmetric512 ? detail::Ss512Fp2::kByteSize : detail::Mnt159Fp6::kByteSize;
}

G1 GroupContext::DecodeG1(ByteSpan bytes) const {
  if (profile_ == CurveProfile::kSymmetric512) {
    return G1(G1::Rep(std::in_place_index<0>, DecodePoint<detail::Ss512Point>(bytes, order_, "G1")));
  }
  return G1(G1::Rep(std::in_place_index<1>, DecodePoint<detail::Mnt159G1Point>(bytes, order_, "G1")));
}

G2 GroupContext::DecodeG2(ByteSpan bytes) const {
  if (profile_ == CurveProfile::kSymmetric512) {
    return G2(G2::Rep(std::in_place_index<0>, DecodePoint<detail::Ss512Point>(bytes, order_, "G2")));
  }
  return G2(G2::Rep(std::in_place_index<1>, DecodePoint<detail::Mnt159G2Point>(bytes, order_, "G2")));
}

GT GroupContext::DecodeGT(ByteSpan bytes) const {
  auto decode = [&](auto tag) -> GT {
    using F = decltype(tag);
    if (bytes.size() != F::kByteSize) throw DecodeError("GT: wrong encoded length");
    auto v = F::FromBytes(bytes.data());
    if (!v || v->IsZero()) throw DecodeError("GT: not a canonical field element");
    if (!v->Pow(order_).IsOne()) throw DecodeError("GT: element outside the order-p subgroup");
    return GT(GT::Rep(std::in_place_type<F>, *v));
  };
  if (profile_ == CurveProfile::kSymmetric512) return decode(detail::Ss512Fp2{});
  return decode(detail::Mnt159Fp6{});
}

Scalar GroupContext::DecodeScalar(ByteSpan bytes) const {
  if (bytes.size() != scalar_size()) throw DecodeError("scalar: wrong encoded length");
  mpz_class v;
  mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  if (v >= order_) throw DecodeError("scalar: value not reduced mod p");
  return Scalar(profile_, v);
}

}  // namespace signcast::crypto
