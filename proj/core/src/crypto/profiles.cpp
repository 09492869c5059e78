#include "signcast/crypto/detail/profiles.hpp"

#include <stdexcept>
#include <type_traits>

#include "signcast/crypto/hash.hpp"

namespace signcast::crypto::detail {
namespace {

mpz_class Parse(const char* decimal) { return mpz_class(decimal, 10); }

// Line through T with slope lambda, evaluated at the untwisted point
// (X, Y sqrt(nu)):  l = (lambda xT - yT - lambda X) + Y sqrt(nu).
template <class Full, class Twist, class Base>
Full EvaluateLine(const Base& lambda, const Base& tx, const Base& ty, const Twist& qx, const Twist& qy) {
  Twist real = -qx.MulBase(lambda);
  Base constant = lambda * tx - ty;
  if constexpr (std::is_same_v<Twist, Base>) {
    real = real + constant;
  } else {
    real = real + Twist(constant);
  }
  return Full(std::move(real), qy);
}

// Miller loop for f_{r,P} followed by the final exponentiation
// f^((q^k - 1) / r) = (conj(f) / f)^((q^(k/2) + 1) / r).
template <class Full, class G1Point, class Twist>
Full ReducedTate(const G1Point& p, const Twist& qx, const Twist& qy, const mpz_class& order,
                 const mpz_class& final_exponent) {
  if (p.IsInfinity()) return Full::One();
  Full f = Full::One();
  G1Point t = p;
  const long bits = static_cast<long>(mpz_sizeinbase(order.get_mpz_t(), 2));
  for (long i = bits - 2; i >= 0; --i) {
    auto lambda = t.TangentSlope();
    f = f.Square() * EvaluateLine<Full>(lambda, t.x(), t.y(), qx, qy);
    t = G1Point::FromSlope(lambda, t.x(), t.x(), t.y());
    if (mpz_tstbit(order.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
      if (t.x() == p.x()) {
        // t = -p on the last bit: the vertical line vanishes under the final
        // exponentiation.
        t = G1Point::Infinity();
        continue;
      }
      auto chord = G1Point::ChordSlope(t, p);
      f = f * EvaluateLine<Full>(chord, t.x(), t.y(), qx, qy);
      t = G1Point::FromSlope(chord, t.x(), p.x(), t.y());
    }
  }
  Full unitary = f.Conjugate() * f.Inverse();
  return unitary.Pow(final_exponent);
}

// Deterministic generator: smallest x >= start on the curve whose lift,
// multiplied by the cofactor, is not the identity.
template <class Point, class MakeX>
Point DeriveGenerator(MakeX make_x, const mpz_class& cofactor) {
  for (unsigned long counter = 0;; ++counter) {
    auto x = make_x(counter);
    auto y = Point::LiftX(x, 0);
    if (!y) continue;
    Point candidate = Point(x, *y).Mul(cofactor);
    if (!candidate.IsInfinity()) return candidate;
  }
}

// x-coordinates expanded from SHA-256 so the generators carry no structure.
template <class F>
F HashToField(const char* label, unsigned long counter, unsigned part) {
  Bytes wide;
  for (std::uint8_t block = 0; wide.size() < F::kByteSize + 16; ++block) {
    ByteWriter w;
    w.PutRaw(AsBytes(label));
    w.PutU64(counter);
    w.PutU8(static_cast<std::uint8_t>(part));
    w.PutU8(block);
    Digest256 d = Sha256(w.bytes());
    wide.insert(wide.end(), d.bytes.begin(), d.bytes.end());
  }
  mpz_class v;
  mpz_import(v.get_mpz_t(), wide.size(), 1, 1, 1, 0, wide.data());
  return F::FromInteger(v);
}

}  // namespace

// ---------------------------------------------------------------- SS512

const mpz_class& Ss512FieldTag::Modulus() {
  static const mpz_class q = Parse(
      "8780710799663312522437781984754049815806883199414208211028653399266475630880222957078625179422662221"
      "423155858769582317459277713367317481324925129998224791");
  return q;
}

const Ss512Fp& Ss512CurveTag::A() {
  static const Ss512Fp a = Ss512Fp::One();
  return a;
}

const Ss512Fp& Ss512CurveTag::B() {
  static const Ss512Fp b = Ss512Fp::Zero();
  return b;
}

const mpz_class& Ss512::Order() {
  // 2^159 + 2^107 + 1
  static const mpz_class r = Parse("730750818665451621361119245571504901405976559617");
  return r;
}

const mpz_class& Ss512::G1Cofactor() {
  static const mpz_class h = Parse(
      "12016012264891146079388821366740534204802954401251311822919615131047207289359704531102844802183906537786776");
  return h;
}

const Ss512Point& Ss512::G1Generator() {
  static const Ss512Point g = DeriveGenerator<Ss512Point>(
      [](unsigned long c) { return HashToField<Ss512Fp>("signcast/ss512/g1", c, 0); }, G1Cofactor());
  return g;
}

const Ss512Point& Ss512::G2Generator() {
  static const Ss512Point g = DeriveGenerator<Ss512Point>(
      [](unsigned long c) { return HashToField<Ss512Fp>("signcast/ss512/g2", c, 0); }, G1Cofactor());
  return g;
}

Ss512Fp2 Ss512::Pair(const G1Point& p, const G2Point& q) {
  if (q.IsInfinity()) return Ss512Fp2::One();
  // Distortion map (x, y) -> (-x, i y) lands in the (X, Y i) form directly.
  return ReducedTate<Ss512Fp2>(p, -q.x(), q.y(), Order(), G1Cofactor());
}

// ---------------------------------------------------------------- MNT159

const mpz_class& Mnt159FieldTag::Modulus() {
  static const mpz_class q = Parse("625852803282871856053922297323874661378036491717");
  return q;
}

const Mnt159Fp& Mnt159CubicTag::M0() {
  static const Mnt159Fp one = Mnt159Fp::One();
  return one;
}

const Mnt159Fp& Mnt159CubicTag::M1() { return M0(); }

const Mnt159Fp& Mnt159CurveTag::A() {
  static const Mnt159Fp a = Mnt159Fp::FromInteger(Parse("581595782028432961150765424293919699975513269268"));
  return a;
}

const Mnt159Fp& Mnt159CurveTag::B() {
  static const Mnt159Fp b = Mnt159Fp::FromInteger(Parse("517921465817243828776542439081147840953753552322"));
  return b;
}

const Mnt159Fp3& Mnt159TwistTag::A() {
  static const Mnt159Fp3 a(Mnt159CurveTag::A());
  return a;
}

const Mnt159Fp3& Mnt159TwistTag::B() {
  static const Mnt159Fp3 b(Mnt159CurveTag::B());
  return b;
}

const Mnt159Fp3& Mnt159TwistTag::YCoeff() {
  static const Mnt159Fp3 nu(Mnt159Fp::FromU64(2));
  return nu;
}

const Mnt159Fp3& Mnt159TwistTag::YCoeffInverse() {
  static const Mnt159Fp3 inv = YCoeff().Inverse();
  return inv;
}

const mpz_class& Mnt159::Order() {
  static const mpz_class r = Parse("208617601094290618684641029477488665211553761021");
  return r;
}

const mpz_class& Mnt159::G1Cofactor() {
  static const mpz_class h(3);
  return h;
}

const mpz_class& Mnt159::Trace() {
  // t = q + 1 - #E(Fq), #E(Fq) = 3 r
  static const mpz_class t = Mnt159FieldTag::Modulus() + 1 - G1Cofactor() * Order();
  return t;
}

const mpz_class& Mnt159::G2Cofactor() {
  // #E'(Fq3) = q^3 + 1 + t3 with t3 = t^3 - 3 q t.
  static const mpz_class h = [] {
    const mpz_class& q = Mnt159FieldTag::Modulus();
    const mpz_class& t = Trace();
    mpz_class t3 = t * t * t - 3 * q * t;
    mpz_class twist_order = q * q * q + 1 + t3;
    if (twist_order % Order() != 0) throw std::logic_error("MNT159 twist order not divisible by r");
    return mpz_class(twist_order / Order());
  }();
  return h;
}

const Mnt159G1Point& Mnt159::G1Generator() {
  static const Mnt159G1Point g = DeriveGenerator<Mnt159G1Point>(
      [](unsigned long c) { return HashToField<Mnt159Fp>("signcast/mnt159/g1", c, 0); }, G1Cofactor());
  return g;
}

const Mnt159G2Point& Mnt159::G2Generator() {
  static const Mnt159G2Point g = DeriveGenerator<Mnt159G2Point>(
      [](unsigned long c) {
        return Mnt159Fp3(HashToField<Mnt159Fp>("signcast/mnt159/g2", c, 0),
                         HashToField<Mnt159Fp>("signcast/mnt159/g2", c, 1),
                         HashToField<Mnt159Fp>("signcast/mnt159/g2", c, 2));
      },
      G2Cofactor());
  return g;
}

Mnt159Fp6 Mnt159::Pair(const G1Point& p, const G2Point& q) {
  if (q.IsInfinity()) return Mnt159Fp6::One();
  static const mpz_class final_exponent = [] {
    const mpz_class& fq = Mnt159FieldTag::Modulus();
    return mpz_class((fq * fq * fq + 1) / Order());
  }();
  return ReducedTate<Mnt159Fp6>(p, q.x(), q.y(), Order(), final_exponent);
}

}  // namespace signcast::crypto::detail
