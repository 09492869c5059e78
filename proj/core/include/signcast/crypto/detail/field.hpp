#pragma once

// Finite-field arithmetic used by the pairing backends. Each field type is
// parameterised by a tag struct exposing its constants, so elements of
// different fields (or of the same field under different curves) never mix.

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "signcast/crypto/bytes.hpp"

namespace signcast::crypto::detail {

// Left-to-right square-and-multiply over any field type exposing One(),
// Square() and operator*.
template <class F>
F PowGeneric(const F& base, const mpz_class& exponent) {
  if (mpz_sgn(exponent.get_mpz_t()) < 0) {
    return PowGeneric(base.Inverse(), mpz_class(-exponent));
  }
  F result = F::One();
  const long bits = static_cast<long>(mpz_sizeinbase(exponent.get_mpz_t(), 2));
  if (mpz_sgn(exponent.get_mpz_t()) == 0) return result;
  for (long i = bits - 1; i >= 0; --i) {
    result = result.Square();
    if (mpz_tstbit(exponent.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) result = result * base;
  }
  return result;
}

// Tonelli-Shanks constants for a field F: |F*| = q_odd * 2^two_adicity.
template <class F>
struct SqrtConstants {
  mpz_class q_odd;
  mpz_class q_odd_plus_one_half;
  mpz_class euler_exponent;  // (|F| - 1) / 2
  unsigned two_adicity = 0;
  F root_of_unity;  // nonresidue^q_odd, a primitive 2^two_adicity-th root

  SqrtConstants() {
    mpz_class order = F::FieldSize() - 1;
    euler_exponent = order / 2;
    q_odd = order;
    while (mpz_even_p(q_odd.get_mpz_t())) {
      q_odd /= 2;
      ++two_adicity;
    }
    q_odd_plus_one_half = (q_odd + 1) / 2;
    root_of_unity = PowGeneric(F::NonSquare(), q_odd);
  }

  static const SqrtConstants& Get() {
    static const SqrtConstants instance;
    return instance;
  }
};

template <class F>
bool IsSquareGeneric(const F& a) {
  if (a.IsZero()) return true;
  return PowGeneric(a, SqrtConstants<F>::Get().euler_exponent).IsOne();
}

template <class F>
std::optional<F> SqrtGeneric(const F& a) {
  if (a.IsZero()) return a;
  const auto& k = SqrtConstants<F>::Get();
  F t = PowGeneric(a, k.q_odd);
  F x = PowGeneric(a, k.q_odd_plus_one_half);
  F c = k.root_of_unity;
  unsigned m = k.two_adicity;
  while (!t.IsOne()) {
    unsigned i = 0;
    F t2 = t;
    while (!t2.IsOne()) {
      t2 = t2.Square();
      if (++i == m) return std::nullopt;  // a is not a square
    }
    F b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = b.Square();
    x = x * b;
    c = b.Square();
    t = t * c;
    m = i;
  }
  return x;
}

// Prime field Z/qZ. Tag provides Modulus() and kByteSize.
template <class Tag>
class Fp {
 public:
  static constexpr std::size_t kByteSize = Tag::kByteSize;
  static constexpr std::size_t kDegree = 1;

  Fp() = default;

  static Fp FromInteger(const mpz_class& v) {
    Fp r;
    mpz_mod(r.v_.get_mpz_t(), v.get_mpz_t(), Mod());
    return r;
  }
  static Fp FromU64(unsigned long v) { return FromInteger(mpz_class(v)); }

  static const mpz_class& Modulus() { return Tag::Modulus(); }
  static const mpz_class& FieldSize() { return Tag::Modulus(); }
  static Fp Zero() { return Fp(); }
  static Fp One() { return FromU64(1); }
  // Smallest integer >= 2 that is a quadratic non-residue.
  static const Fp& NonSquare() {
    static const Fp value = [] {
      for (unsigned long c = 2;; ++c) {
        Fp candidate = FromU64(c);
        if (!candidate.IsSquare()) return candidate;
      }
    }();
    return value;
  }

  const mpz_class& value() const { return v_; }
  bool IsZero() const { return mpz_sgn(v_.get_mpz_t()) == 0; }
  bool IsOne() const { return mpz_cmp_ui(v_.get_mpz_t(), 1) == 0; }

  friend Fp operator+(const Fp& a, const Fp& b) {
    Fp r;
    mpz_add(r.v_.get_mpz_t(), a.v_.get_mpz_t(), b.v_.get_mpz_t());
    if (mpz_cmp(r.v_.get_mpz_t(), Mod()) >= 0) mpz_sub(r.v_.get_mpz_t(), r.v_.get_mpz_t(), Mod());
    return r;
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    Fp r;
    mpz_sub(r.v_.get_mpz_t(), a.v_.get_mpz_t(), b.v_.get_mpz_t());
    if (mpz_sgn(r.v_.get_mpz_t()) < 0) mpz_add(r.v_.get_mpz_t(), r.v_.get_mpz_t(), Mod());
    return r;
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    Fp r;
    mpz_mul(r.v_.get_mpz_t(), a.v_.get_mpz_t(), b.v_.get_mpz_t());
    mpz_tdiv_r(r.v_.get_mpz_t(), r.v_.get_mpz_t(), Mod());
    return r;
  }
  Fp operator-() const {
    Fp r;
    if (!IsZero()) mpz_sub(r.v_.get_mpz_t(), Mod(), v_.get_mpz_t());
    return r;
  }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }

  Fp Square() const { return *this * *this; }
  Fp Double() const { return *this + *this; }
  Fp MulBase(const Fp& s) const { return *this * s; }

  Fp Inverse() const {
    if (IsZero()) throw std::domain_error("inverse of zero");
    Fp r;
    mpz_invert(r.v_.get_mpz_t(), v_.get_mpz_t(), Mod());
    return r;
  }
  Fp Pow(const mpz_class& e) const {
    Fp r;
    mpz_powm(r.v_.get_mpz_t(), v_.get_mpz_t(), e.get_mpz_t(), Mod());
    return r;
  }

  bool IsSquare() const { return mpz_legendre(v_.get_mpz_t(), Mod()) >= 0; }
  std::optional<Fp> Sqrt() const { return SqrtGeneric(*this); }

  // Parity of the canonical representative; distinguishes a from -a.
  int Sign() const { return mpz_odd_p(v_.get_mpz_t()) ? 1 : 0; }

  void ToBytes(std::uint8_t* out) const {
    std::fill(out, out + kByteSize, std::uint8_t{0});
    std::size_t need = (mpz_sizeinbase(v_.get_mpz_t(), 2) + 7) / 8;
    if (IsZero()) return;
    std::size_t count = 0;
    mpz_export(out + (kByteSize - need), &count, 1, 1, 1, 0, v_.get_mpz_t());
  }
  // Rejects values >= q so every element has exactly one encoding.
  static std::optional<Fp> FromBytes(const std::uint8_t* in) {
    Fp r;
    mpz_import(r.v_.get_mpz_t(), kByteSize, 1, 1, 1, 0, in);
    if (mpz_cmp(r.v_.get_mpz_t(), Mod()) >= 0) return std::nullopt;
    return r;
  }

  friend bool operator==(const Fp& a, const Fp& b) { return mpz_cmp(a.v_.get_mpz_t(), b.v_.get_mpz_t()) == 0; }

 private:
  static mpz_srcptr Mod() { return Tag::Modulus().get_mpz_t(); }
  mpz_class v_;
};

// Base[s] / (s^2 - nu). Tag provides Base, NonResidue(), MulByNonResidue().
template <class Tag>
class QuadExt {
 public:
  using Base = typename Tag::Base;
  static constexpr std::size_t kByteSize = 2 * Base::kByteSize;
  static constexpr std::size_t kDegree = 2 * Base::kDegree;

  QuadExt() = default;
  QuadExt(Base c0, Base c1) : c0_(std::move(c0)), c1_(std::move(c1)) {}

  static QuadExt Zero() { return {}; }
  static QuadExt One() { return {Base::One(), Base::Zero()}; }
  static const mpz_class& FieldSize() {
    static const mpz_class size = Base::FieldSize() * Base::FieldSize();
    return size;
  }

  const Base& c0() const { return c0_; }
  const Base& c1() const { return c1_; }
  bool IsZero() const { return c0_.IsZero() && c1_.IsZero(); }
  bool IsOne() const { return c0_.IsOne() && c1_.IsZero(); }

  friend QuadExt operator+(const QuadExt& a, const QuadExt& b) { return {a.c0_ + b.c0_, a.c1_ + b.c1_}; }
  friend QuadExt operator-(const QuadExt& a, const QuadExt& b) { return {a.c0_ - b.c0_, a.c1_ - b.c1_}; }
  QuadExt operator-() const { return {-c0_, -c1_}; }
  friend QuadExt operator*(const QuadExt& a, const QuadExt& b) {
    Base v0 = a.c0_ * b.c0_;
    Base v1 = a.c1_ * b.c1_;
    Base mid = (a.c0_ + a.c1_) * (b.c0_ + b.c1_) - v0 - v1;
    return {v0 + Tag::MulByNonResidue(v1), std::move(mid)};
  }
  QuadExt& operator*=(const QuadExt& o) { return *this = *this * o; }

  QuadExt Square() const {
    // (c0 + c1 s)^2 = c0^2 + nu c1^2 + 2 c0 c1 s
    Base prod = c0_ * c1_;
    Base real = (c0_ + c1_) * (c0_ + Tag::MulByNonResidue(c1_)) - prod - Tag::MulByNonResidue(prod);
    return {std::move(real), prod.Double()};
  }
  QuadExt Conjugate() const { return {c0_, -c1_}; }
  QuadExt Inverse() const {
    Base norm = c0_.Square() - Tag::MulByNonResidue(c1_.Square());
    Base inv = norm.Inverse();
    return {c0_ * inv, -(c1_ * inv)};
  }
  QuadExt Pow(const mpz_class& e) const { return PowGeneric(*this, e); }

  void ToBytes(std::uint8_t* out) const {
    c0_.ToBytes(out);
    c1_.ToBytes(out + Base::kByteSize);
  }
  static std::optional<QuadExt> FromBytes(const std::uint8_t* in) {
    auto c0 = Base::FromBytes(in);
    auto c1 = Base::FromBytes(in + Base::kByteSize);
    if (!c0 || !c1) return std::nullopt;
    return QuadExt(std::move(*c0), std::move(*c1));
  }

  friend bool operator==(const QuadExt& a, const QuadExt& b) { return a.c0_ == b.c0_ && a.c1_ == b.c1_; }

 private:
  Base c0_;
  Base c1_;
};

// Fp[x] / (x^3 - m1 x - m0). Tag provides Base (a prime field), M0(), M1()
// and kUnitCoefficients (m0 = m1 = 1, reduction by additions only).
template <class Tag>
class CubicExt {
 public:
  using Base = typename Tag::Base;
  static constexpr std::size_t kByteSize = 3 * Base::kByteSize;
  static constexpr std::size_t kDegree = 3;

  CubicExt() = default;
  CubicExt(Base c0, Base c1, Base c2) : c_{std::move(c0), std::move(c1), std::move(c2)} {}
  explicit CubicExt(Base c0) : c_{std::move(c0), Base::Zero(), Base::Zero()} {}

  static CubicExt Zero() { return {}; }
  static CubicExt One() { return CubicExt(Base::One()); }
  static const mpz_class& FieldSize() {
    static const mpz_class size = Base::FieldSize() * Base::FieldSize() * Base::FieldSize();
    return size;
  }
  static const CubicExt& NonSquare() {
    static const CubicExt value(Base::NonSquare());
    return value;
  }

  const Base& coeff(std::size_t i) const { return c_[i]; }
  bool IsZero() const { return c_[0].IsZero() && c_[1].IsZero() && c_[2].IsZero(); }
  bool IsOne() const { return c_[0].IsOne() && c_[1].IsZero() && c_[2].IsZero(); }

  friend CubicExt operator+(const CubicExt& a, const CubicExt& b) {
    return {a.c_[0] + b.c_[0], a.c_[1] + b.c_[1], a.c_[2] + b.c_[2]};
  }
  friend CubicExt operator-(const CubicExt& a, const CubicExt& b) {
    return {a.c_[0] - b.c_[0], a.c_[1] - b.c_[1], a.c_[2] - b.c_[2]};
  }
  CubicExt operator-() const { return {-c_[0], -c_[1], -c_[2]}; }
  friend CubicExt operator*(const CubicExt& a, const CubicExt& b) {
    // Karatsuba-style products of the degree-2 polynomials.
    Base v0 = a.c_[0] * b.c_[0];
    Base v1 = a.c_[1] * b.c_[1];
    Base v2 = a.c_[2] * b.c_[2];
    Base d1 = (a.c_[0] + a.c_[1]) * (b.c_[0] + b.c_[1]) - v0 - v1;
    Base d2 = (a.c_[0] + a.c_[2]) * (b.c_[0] + b.c_[2]) - v0 - v2 + v1;
    Base d3 = (a.c_[1] + a.c_[2]) * (b.c_[1] + b.c_[2]) - v1 - v2;
    return Reduce(v0, d1, d2, d3, v2);
  }
  CubicExt& operator*=(const CubicExt& o) { return *this = *this * o; }
  CubicExt Square() const { return *this * *this; }
  CubicExt Double() const { return *this + *this; }
  CubicExt MulBase(const Base& s) const { return {c_[0] * s, c_[1] * s, c_[2] * s}; }

  CubicExt Inverse() const {
    // Solve M b = e0 where M is the matrix of multiplication by *this.
    // Columns: a, a*x, a*x^2.
    std::array<std::array<Base, 3>, 3> m;
    CubicExt col1 = MulX(*this);
    CubicExt col2 = MulX(col1);
    for (int r = 0; r < 3; ++r) {
      m[r][0] = c_[r];
      m[r][1] = col1.c_[r];
      m[r][2] = col2.c_[r];
    }
    Base cof00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    Base cof01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    Base cof02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    Base det = m[0][0] * cof00 + m[0][1] * cof01 + m[0][2] * cof02;
    if (det.IsZero()) throw std::domain_error("inverse of zero");
    Base inv = det.Inverse();
    // b = adj(M) e0 / det: first column of the adjugate is the first row of cofactors.
    return {cof00 * inv, cof01 * inv, cof02 * inv};
  }
  CubicExt Pow(const mpz_class& e) const { return PowGeneric(*this, e); }

  bool IsSquare() const { return IsSquareGeneric(*this); }
  std::optional<CubicExt> Sqrt() const { return SqrtGeneric(*this); }
  int Sign() const {
    for (const Base& c : c_) {
      if (!c.IsZero()) return c.Sign();
    }
    return 0;
  }

  void ToBytes(std::uint8_t* out) const {
    for (std::size_t i = 0; i < 3; ++i) c_[i].ToBytes(out + i * Base::kByteSize);
  }
  static std::optional<CubicExt> FromBytes(const std::uint8_t* in) {
    CubicExt r;
    for (std::size_t i = 0; i < 3; ++i) {
      auto c = Base::FromBytes(in + i * Base::kByteSize);
      if (!c) return std::nullopt;
      r.c_[i] = std::move(*c);
    }
    return r;
  }

  friend bool operator==(const CubicExt& a, const CubicExt& b) { return a.c_ == b.c_; }

 private:
  // x^3 = m0 + m1 x, x^4 = m0 x + m1 x^2.
  static CubicExt Reduce(const Base& d0, const Base& d1, const Base& d2, const Base& d3, const Base& d4) {
    if constexpr (Tag::kUnitCoefficients) {
      return {d0 + d3, d1 + d3 + d4, d2 + d4};
    } else {
      const Base& m0 = Tag::M0();
      const Base& m1 = Tag::M1();
      return {d0 + m0 * d3, d1 + m1 * d3 + m0 * d4, d2 + m1 * d4};
    }
  }
  static CubicExt MulX(const CubicExt& a) {
    // (a0 + a1 x + a2 x^2) x = m0 a2 + (a0 + m1 a2) x + a1 x^2
    if constexpr (Tag::kUnitCoefficients) {
      return {a.c_[2], a.c_[0] + a.c_[2], a.c_[1]};
    } else {
      return {Tag::M0() * a.c_[2], a.c_[0] + Tag::M1() * a.c_[2], a.c_[1]};
    }
  }

  std::array<Base, 3> c_;
};

}  // namespace signcast::crypto::detail
