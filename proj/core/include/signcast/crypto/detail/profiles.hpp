#pragma once

// Concrete pairing families.
//
//  * SS512: supersingular y^2 = x^3 + x over a 512-bit prime q = 3 mod 4,
//    embedding degree 2, 160-bit group order r = 2^159 + 2^107 + 1.
//    G1 = G2 = E(Fq)[r]; the pairing applies the distortion map
//    (x, y) -> (-x, i y) to its second argument.
//  * MNT159: ordinary MNT curve over a 159-bit prime, embedding degree 6.
//    G1 = E(Fq)[r]; G2 = E'(Fq3)[r] on the quadratic twist nu y^2 = x^3 + a x + b
//    with nu = 2, Fq3 = Fq[x] / (x^3 - x - 1), Fq6 = Fq3[sqrt(nu)].
//
// Both use the reduced Tate pairing with denominator elimination.

#include <gmpxx.h>

#include "signcast/crypto/detail/curve.hpp"
#include "signcast/crypto/detail/field.hpp"

namespace signcast::crypto::detail {

// ---------------------------------------------------------------- SS512

struct Ss512FieldTag {
  static constexpr std::size_t kByteSize = 64;
  static const mpz_class& Modulus();
};
using Ss512Fp = Fp<Ss512FieldTag>;

struct Ss512QuadTag {
  using Base = Ss512Fp;
  // i^2 = -1
  static Ss512Fp MulByNonResidue(const Ss512Fp& v) { return -v; }
};
using Ss512Fp2 = QuadExt<Ss512QuadTag>;

struct Ss512CurveTag {
  using Field = Ss512Fp;
  static constexpr bool kYCoeffIsOne = true;
  static const Ss512Fp& A();
  static const Ss512Fp& B();
};
using Ss512Point = AffinePoint<Ss512CurveTag>;

struct Ss512 {
  using G1Point = Ss512Point;
  using G2Point = Ss512Point;
  using Gt = Ss512Fp2;

  static const mpz_class& Order();
  static const mpz_class& G1Cofactor();
  static const G1Point& G1Generator();
  static const G2Point& G2Generator();
  static Gt Pair(const G1Point& p, const G2Point& q);
};

// ---------------------------------------------------------------- MNT159

struct Mnt159FieldTag {
  static constexpr std::size_t kByteSize = 20;
  static const mpz_class& Modulus();
};
using Mnt159Fp = Fp<Mnt159FieldTag>;

struct Mnt159CubicTag {
  using Base = Mnt159Fp;
  static constexpr bool kUnitCoefficients = true;  // x^3 = 1 + x
  static const Mnt159Fp& M0();
  static const Mnt159Fp& M1();
};
using Mnt159Fp3 = CubicExt<Mnt159CubicTag>;

struct Mnt159SexticTag {
  using Base = Mnt159Fp3;
  static Mnt159Fp3 MulByNonResidue(const Mnt159Fp3& v) { return v.Double(); }  // nu = 2
};
using Mnt159Fp6 = QuadExt<Mnt159SexticTag>;

struct Mnt159CurveTag {
  using Field = Mnt159Fp;
  static constexpr bool kYCoeffIsOne = true;
  static const Mnt159Fp& A();
  static const Mnt159Fp& B();
};
using Mnt159G1Point = AffinePoint<Mnt159CurveTag>;

struct Mnt159TwistTag {
  using Field = Mnt159Fp3;
  static constexpr bool kYCoeffIsOne = false;
  static const Mnt159Fp3& A();
  static const Mnt159Fp3& B();
  static const Mnt159Fp3& YCoeff();
  static const Mnt159Fp3& YCoeffInverse();
};
using Mnt159G2Point = AffinePoint<Mnt159TwistTag>;

struct Mnt159 {
  using G1Point = Mnt159G1Point;
  using G2Point = Mnt159G2Point;
  using Gt = Mnt159Fp6;

  static const mpz_class& Order();
  static const mpz_class& G1Cofactor();
  static const mpz_class& G2Cofactor();
  static const mpz_class& Trace();  // Frobenius trace of E(Fq)
  static const G1Point& G1Generator();
  static const G2Point& G2Generator();
  static Gt Pair(const G1Point& p, const G2Point& q);
};

}  // namespace signcast::crypto::detail
