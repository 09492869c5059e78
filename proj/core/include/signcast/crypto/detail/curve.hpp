#pragma once

// Affine short-Weierstrass points on  c * y^2 = x^3 + a x + b.
// c = 1 for ordinary curves; c = nu (a non-square) models the quadratic twist
// directly, so twisted points never need to be mapped back for group law.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "signcast/crypto/detail/field.hpp"

namespace signcast::crypto::detail {

// Curve tag: Field, A(), B(), YCoeff(), kYCoeffIsOne.
template <class Curve>
class AffinePoint {
 public:
  using Field = typename Curve::Field;
  // Compressed encoding: one prefix byte then x.
  static constexpr std::size_t kEncodedSize = 1 + Field::kByteSize;
  static constexpr std::uint8_t kPrefixInfinity = 0x01;
  static constexpr std::uint8_t kPrefixEven = 0x02;
  static constexpr std::uint8_t kPrefixOdd = 0x03;

  AffinePoint() = default;  // point at infinity
  AffinePoint(Field x, Field y) : x_(std::move(x)), y_(std::move(y)), infinity_(false) {}

  static AffinePoint Infinity() { return {}; }

  bool IsInfinity() const { return infinity_; }
  const Field& x() const { return x_; }
  const Field& y() const { return y_; }

  static Field Rhs(const Field& x) { return (x.Square() + Curve::A()) * x + Curve::B(); }

  bool IsOnCurve() const {
    if (infinity_) return true;
    return ScaleY(y_.Square()) == Rhs(x_);
  }

  AffinePoint Negate() const {
    if (infinity_) return *this;
    return {x_, -y_};
  }

  // Slope of the tangent at a finite point with y != 0.
  Field TangentSlope() const {
    Field x2 = x_.Square();
    Field num = x2.Double() + x2 + Curve::A();
    return num * ScaleY(y_.Double()).Inverse();
  }
  // Slope of the chord through two finite points with distinct x.
  static Field ChordSlope(const AffinePoint& p, const AffinePoint& q) {
    return (q.y_ - p.y_) * (q.x_ - p.x_).Inverse();
  }
  // Third intersection of the line with slope lambda through (x1, y1) and
  // (x2, .), negated: the group sum.
  static AffinePoint FromSlope(const Field& lambda, const Field& x1, const Field& x2, const Field& y1) {
    Field x3 = ScaleY(lambda.Square()) - x1 - x2;
    Field y3 = lambda * (x1 - x3) - y1;
    return {std::move(x3), std::move(y3)};
  }

  AffinePoint Double() const {
    if (infinity_ || y_.IsZero()) return Infinity();
    return FromSlope(TangentSlope(), x_, x_, y_);
  }

  friend AffinePoint operator+(const AffinePoint& p, const AffinePoint& q) {
    if (p.infinity_) return q;
    if (q.infinity_) return p;
    if (p.x_ == q.x_) {
      if (p.y_ == q.y_) return p.Double();
      return Infinity();
    }
    return FromSlope(ChordSlope(p, q), p.x_, q.x_, p.y_);
  }

  // Scalar multiple, width-5 signed window.
  AffinePoint Mul(const mpz_class& k) const {
    if (infinity_ || mpz_sgn(k.get_mpz_t()) == 0) return Infinity();
    if (mpz_sgn(k.get_mpz_t()) < 0) return Negate().Mul(mpz_class(-k));
    std::vector<int> naf = WindowNaf(k, 5);
    // Odd multiples P, 3P, ..., 15P.
    std::array<AffinePoint, 8> table;
    table[0] = *this;
    AffinePoint twice = Double();
    for (std::size_t i = 1; i < table.size(); ++i) table[i] = table[i - 1] + twice;
    AffinePoint acc;
    for (auto it = naf.rbegin(); it != naf.rend(); ++it) {
      acc = acc.Double();
      if (*it > 0) acc = acc + table[static_cast<std::size_t>(*it / 2)];
      if (*it < 0) acc = acc + table[static_cast<std::size_t>(-*it / 2)].Negate();
    }
    return acc;
  }

  friend bool operator==(const AffinePoint& p, const AffinePoint& q) {
    if (p.infinity_ || q.infinity_) return p.infinity_ == q.infinity_;
    return p.x_ == q.x_ && p.y_ == q.y_;
  }

  void Encode(std::uint8_t* out) const {
    if (infinity_) {
      out[0] = kPrefixInfinity;
      std::fill(out + 1, out + kEncodedSize, std::uint8_t{0});
      return;
    }
    out[0] = y_.Sign() ? kPrefixOdd : kPrefixEven;
    x_.ToBytes(out + 1);
  }

  // Decodes and checks the point lies on the curve. Subgroup membership is the
  // caller's concern.
  static std::optional<AffinePoint> Decode(const std::uint8_t* in) {
    const std::uint8_t prefix = in[0];
    if (prefix == kPrefixInfinity) {
      for (std::size_t i = 1; i < kEncodedSize; ++i) {
        if (in[i] != 0) return std::nullopt;
      }
      return Infinity();
    }
    if (prefix != kPrefixEven && prefix != kPrefixOdd) return std::nullopt;
    auto x = Field::FromBytes(in + 1);
    if (!x) return std::nullopt;
    auto y = LiftX(*x, prefix == kPrefixOdd ? 1 : 0);
    if (!y) return std::nullopt;
    return AffinePoint(std::move(*x), std::move(*y));
  }

  // y with the requested sign such that (x, y) is on the curve, if any.
  static std::optional<Field> LiftX(const Field& x, int sign) {
    Field rhs = Rhs(x);
    if constexpr (!Curve::kYCoeffIsOne) rhs = rhs * Curve::YCoeffInverse();
    auto y = rhs.Sqrt();
    if (!y) return std::nullopt;
    if (y->IsZero() && sign == 1) return std::nullopt;
    if (y->Sign() != sign) y = -*y;
    return y;
  }

 private:
  static Field ScaleY(const Field& v) {
    if constexpr (Curve::kYCoeffIsOne) {
      return v;
    } else {
      return v * Curve::YCoeff();
    }
  }

  static std::vector<int> WindowNaf(mpz_class k, int width) {
    std::vector<int> digits;
    const long modulus = 1L << width;
    while (mpz_sgn(k.get_mpz_t()) > 0) {
      int digit = 0;
      if (mpz_odd_p(k.get_mpz_t())) {
        long low = static_cast<long>(mpz_fdiv_ui(k.get_mpz_t(), static_cast<unsigned long>(modulus)));
        if (low >= modulus / 2) low -= modulus;
        digit = static_cast<int>(low);
        k -= low;
      }
      digits.push_back(digit);
      mpz_fdiv_q_2exp(k.get_mpz_t(), k.get_mpz_t(), 1);
    }
    return digits;
  }

  Field x_;
  Field y_;
  bool infinity_ = true;
};

}  // namespace signcast::crypto::detail
