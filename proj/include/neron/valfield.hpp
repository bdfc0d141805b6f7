// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "neron/errors.hpp"
#include "neron/residue.hpp"

namespace neron {

inline constexpr long kInfinity = std::numeric_limits<long>::max() / 4;

struct Rational {
  long num = 0;
  long den = 1;
  Rational() = default;
  Rational(long n, long d = 1);
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return !(o < *this); }
  Rational operator-() const { return {-num, den}; }
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const { return *this + (-o); }
  Rational operator*(const Rational& o) const;
  bool is_integer() const { return den == 1; }
  long floor() const;
  long ceil() const;
  std::string str() const;
};

enum class FieldKind { PAdic, Laurent };

// Element of the prime ring: an integer (p-adic case) or a polynomial in t
// over F_p (Laurent case). The uniformizer is p, respectively t.
struct Coef {
  mpz_class z;
  std::vector<std::uint64_t> t;
};

// Complete discretely valued field K_D: the unramified extension of relative
// degree d = D / k of Q_p (k = 1) or of F_q((t)) with q = p^k.
struct BaseField {
  FieldKind kind = FieldKind::PAdic;
  std::uint64_t p = 2;
  int base_degree = 1;  // k
  int level = 1;        // D, absolute residue degree over F_p
  long precision = 32;  // N
  int tower_cap = 24;
  FieldPtr residue;                  // F_{p^D}
  std::vector<Coef> modulus;         // monic lift of the residue modulus, size D + 1
  FiniteField::Elt base_generator;   // image of the generator of F_q inside F_{p^D}

  int relative_degree() const { return level / base_degree; }
  std::uint64_t q() const;
  std::string uniformizer() const { return kind == FieldKind::PAdic ? std::to_string(p) : "t"; }
  std::string name() const;

  // Prime-ring helpers.
  Coef zero() const;
  Coef one() const;
  Coef from_long(long v) const;
  Coef from_mpz(const mpz_class& v) const;
  bool is_zero(const Coef& a) const;
  Coef add(const Coef& a, const Coef& b) const;
  Coef sub(const Coef& a, const Coef& b) const;
  Coef neg(const Coef& a) const;
  Coef mul(const Coef& a, const Coef& b) const;
  Coef divexact(const Coef& a, const Coef& b) const;
  long val(const Coef& a) const;
  Coef shift_down(const Coef& a, long k) const;
  Coef shift_up(const Coef& a, long k) const;
  Coef mod_pi(const Coef& a, long k) const;
  std::uint64_t residue_of(const Coef& a) const;
  Coef inv_mod_pi(const Coef& a, long k) const;
  Coef gcd(const Coef& a, const Coef& b) const;
  // Scales a denominator to canonical form; returns the unit it was divided by.
  Coef canonical_unit(const Coef& a) const;
  bool equal(const Coef& a, const Coef& b) const;
  std::string str(const Coef& a) const;
};

using Base = std::shared_ptr<const BaseField>;

Base make_padic(std::uint64_t p, long precision = 32, int tower_cap = 24);
Base make_laurent(std::uint64_t q, long precision = 32, int tower_cap = 24);
// Level replaced by lcm(d, m) (relative degrees); TowerTooLarge past the cap.
Base extend_unramified(const Base& F, int m);
// Precision doubled up to 512; PrecisionCapReached beyond.
Base escalate_precision(const Base& F);
Base with_precision(const Base& F, long precision);
bool same_field(const Base& a, const Base& b);

// An element u * pi^shift of K_D. Exact elements are quotients num / den with
// den prime to pi (they live in the dense subfield Frac(prime ring)[z]/(g)).
// Inexact elements are known modulo pi^prec.
class Elem {
public:
  Elem() = default;
  explicit Elem(Base F);

  static Elem zero(const Base& F) { return Elem(F); }
  static Elem one(const Base& F) { return from_long(F, 1); }
  static Elem from_long(const Base& F, long v);
  static Elem from_mpz(const Base& F, const mpz_class& v);
  static Elem from_coef(const Base& F, const Coef& c);
  static Elem from_coords(const Base& F, std::vector<Coef> coords, Coef den, long shift, long prec = kInfinity);
  static Elem from_rational(const Base& F, const mpz_class& num, const mpz_class& den);
  static Elem pi_power(const Base& F, long k);
  static Elem lift(const Base& F, const FiniteField::Elt& r);
  static Elem generator(const Base& F);

  const Base& field() const { return F_; }
  bool is_exact() const { return prec_ >= kInfinity; }
  bool is_exact_zero() const { return is_exact() && zero_; }
  bool is_inexact_zero() const { return !is_exact() && zero_; }
  long precision() const { return prec_; }
  // Certified valuation; PrecisionExhausted when the value is zero to the known precision.
  long val() const;
  // Lower bound on the valuation (prec for inexact zeros, kInfinity for exact zero).
  long val_bound() const;
  bool certainly_nonzero() const { return !zero_; }
  long shift() const { return shift_; }

  // Reduction mod pi; requires val_bound() >= 0 and a known residue.
  FiniteField::Elt residue() const;
  // Residue of this / pi^val().
  FiniteField::Elt leading_digit() const;

  Elem operator+(const Elem& o) const;
  Elem operator-(const Elem& o) const;
  Elem operator-() const;
  Elem operator*(const Elem& o) const;
  Elem operator/(const Elem& o) const { return *this * o.inverse(); }
  Elem& operator+=(const Elem& o) { return *this = *this + o; }
  Elem& operator-=(const Elem& o) { return *this = *this - o; }
  Elem& operator*=(const Elem& o) { return *this = *this * o; }
  Elem inverse() const;
  Elem pow(long e) const;
  Elem mul_pi(long k) const;

  // Drops exactness and keeps the value modulo pi^prec.
  Elem truncate(long prec) const;
  // Exact equality for exact operands; certain-equality otherwise.
  bool equals(const Elem& o) const;
  std::vector<FiniteField::Elt> digits(long count) const;

  // Coordinates over the prime ring after clearing the denominator mod pi^k.
  std::vector<Coef> integral_coords(long k) const;
  const std::vector<Coef>& num() const { return num_; }
  const Coef& den() const { return den_; }
  std::string str() const;

  Elem reembed(const Base& target) const;

private:
  void normalize();
  Elem with(std::vector<Coef> num, Coef den, long shift, long prec) const;

  Base F_;
  std::vector<Coef> num_;
  Coef den_;
  long shift_ = 0;
  long prec_ = kInfinity;
  bool zero_ = true;
};

// Polynomials over K_D, coefficients low to high. Only exact-zero leading
// coefficients are trimmed.
struct Poly {
  Base F;
  std::vector<Elem> c;

  Poly() = default;
  explicit Poly(Base f) : F(std::move(f)) {}
  Poly(Base f, std::vector<Elem> coeffs);
  static Poly x(const Base& F);
  static Poly constant(const Elem& a);
  static Poly from_longs(const Base& F, const std::vector<long>& coeffs);

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  const Elem& lead() const { return c.back(); }
  Elem coeff(int i) const;
  bool is_exact() const;
  long precision() const;
  void trim();

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scale(const Elem& a) const;
  Elem eval(const Elem& v) const;
  // f(a + b*y)
  Poly shift_scale(const Elem& a, const Elem& b) const;
  // y^deg f(1/y)
  Poly reversed() const;
  Poly derivative() const;
  Poly monic() const;
  // Division by a polynomial with invertible leading coefficient.
  std::pair<Poly, Poly> divrem(const Poly& d) const;
  // Multiplies by a power of pi so that the minimum coefficient valuation is 0.
  Poly primitive() const;
  long min_val() const;
  Poly truncate(long prec) const;
  Poly reembed(const Base& target) const;
  std::string str(const std::string& var = "x") const;
};

Poly gcd_exact(const Poly& a, const Poly& b);
Poly pow_poly(const Poly& a, int e);
Poly compose(const Poly& outer, const Poly& inner);

struct Segment {
  Rational slope;  // negated root valuation
  long length = 0;
  long start = 0;  // abscissa of the left endpoint
  long start_val = 0;
};

struct NewtonPolygon {
  std::vector<Segment> segments;  // slopes strictly increasing
  long zero_roots = 0;
  long lead_val = 0;
  std::vector<std::pair<Rational, long>> root_valuations() const;
  std::string str() const;
};

NewtonPolygon newton_polygon(const Poly& f);
// Residual polynomial (monic, over F_{p^D}) attached to the segment of the
// given slope; its roots are the residues of y^e / pi^h for the roots y of
// valuation h/e on that segment.
FPoly residual_polynomial(const Poly& f, const Rational& slope);
FPoly reduce(const Poly& f);
Poly lift(const Base& F, const FPoly& f);

// Dense matrices over K_D.
using Matrix = std::vector<std::vector<Elem>>;
Poly charpoly(const Matrix& M, const Base& F);
Elem determinant(Matrix M, const Base& F);
// Solves M v = b by elimination with minimal-valuation pivots.
std::vector<Elem> solve(Matrix M, std::vector<Elem> b, const Base& F);

// Lifts f = g h (f monic with integral coefficients, g and h monic and coprime
// mod pi) to precision prec. Also returns s, t with s g + t h = 1.
struct HenselResult {
  Poly g, h, s, t;
};
HenselResult hensel_lift(const Poly& f, const FPoly& g0, const FPoly& h0, long prec);

// p-adic root of f near the simple residue root r, to precision prec.
Elem hensel_root(const Poly& f, const FiniteField::Elt& r, long prec);

}  // namespace neron
