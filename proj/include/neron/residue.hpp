// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace neron {

// The finite field F_{p^n}, realized as F_p[z]/(m(z)) where m is the
// lexicographically least monic irreducible polynomial of degree n.
// Elements are coordinate vectors of length n in the basis 1, z, ..., z^{n-1}.
class FiniteField {
public:
  using Elt = std::vector<std::uint64_t>;

  FiniteField(std::uint64_t p, int degree);

  std::uint64_t p() const { return p_; }
  int degree() const { return n_; }
  const std::vector<std::uint64_t>& modulus() const { return mod_; }
  mpz_class order() const;

  Elt zero() const { return Elt(n_, 0); }
  Elt one() const;
  Elt gen() const;
  Elt from_int(long long v) const;
  Elt from_coords(std::vector<std::uint64_t> c) const;

  bool is_zero(const Elt& a) const;
  bool is_one(const Elt& a) const;
  Elt add(const Elt& a, const Elt& b) const;
  Elt sub(const Elt& a, const Elt& b) const;
  Elt neg(const Elt& a) const;
  Elt mul(const Elt& a, const Elt& b) const;
  Elt scale(const Elt& a, std::uint64_t c) const;
  Elt inv(const Elt& a) const;
  Elt pow(const Elt& a, const mpz_class& e) const;
  Elt frobenius(const Elt& a) const { return pow(a, mpz_class(p_)); }
  // Unique p-th root (the field is perfect).
  Elt pth_root(const Elt& a) const;

  // Degree over F_p of the smallest subfield containing a.
  int element_degree(const Elt& a) const;
  bool is_square(const Elt& a) const;

  // Total order used for deterministic output: compares the top coordinate first.
  static int compare(const Elt& a, const Elt& b);
  std::string to_string(const Elt& a) const;

  // Image of this field's generator in `target` (target degree must be a multiple).
  Elt embedding_image(const FiniteField& target) const;
  Elt embed(const Elt& a, const FiniteField& target, const Elt& gen_image) const;

  std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t invmod(std::uint64_t a) const;

private:
  std::uint64_t p_;
  int n_;
  std::vector<std::uint64_t> mod_;
};

using FieldPtr = std::shared_ptr<const FiniteField>;

// Cached field construction; identical (p, n) pairs share one instance.
FieldPtr finite_field(std::uint64_t p, int degree);

// Polynomials over a finite field, coefficients low to high, no trailing zeros.
using FPoly = std::vector<FiniteField::Elt>;

namespace fpoly {

int degree(const FPoly& f);
void trim(const FiniteField& F, FPoly& f);
FPoly constant(const FiniteField& F, const FiniteField::Elt& c);
FPoly x(const FiniteField& F);
FPoly add(const FiniteField& F, const FPoly& a, const FPoly& b);
FPoly sub(const FiniteField& F, const FPoly& a, const FPoly& b);
FPoly mul(const FiniteField& F, const FPoly& a, const FPoly& b);
FPoly scale(const FiniteField& F, const FPoly& a, const FiniteField::Elt& c);
std::pair<FPoly, FPoly> divrem(const FiniteField& F, const FPoly& a, const FPoly& b);
FPoly rem(const FiniteField& F, const FPoly& a, const FPoly& b);
FPoly monic(const FiniteField& F, const FPoly& a);
FPoly gcd(const FiniteField& F, const FPoly& a, const FPoly& b);
// Returns (g, s, t) with s*a + t*b = g monic.
std::tuple<FPoly, FPoly, FPoly> xgcd(const FiniteField& F, const FPoly& a, const FPoly& b);
FPoly derivative(const FiniteField& F, const FPoly& a);
FPoly powmod(const FiniteField& F, const FPoly& a, const mpz_class& e, const FPoly& m);
FiniteField::Elt eval(const FiniteField& F, const FPoly& a, const FiniteField::Elt& v);
bool equal(const FPoly& a, const FPoly& b);
std::string to_string(const FiniteField& F, const FPoly& a, const std::string& var = "y");

// Factorization into monic irreducibles with multiplicities, sorted by
// (degree, coefficients) for determinism.
std::vector<std::pair<FPoly, int>> factor(const FiniteField& F, const FPoly& f);
// Roots in F with multiplicities (sorted).
std::vector<std::pair<FiniteField::Elt, int>> roots(const FiniteField& F, const FPoly& f);
bool is_irreducible(const FiniteField& F, const FPoly& f);

}  // namespace fpoly

}  // namespace neron
