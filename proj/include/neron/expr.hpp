// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "neron/valfield.hpp"

namespace neron {

// Polynomial in x and t with rational coefficients, keyed by (deg_x, deg_t).
struct Expr {
  std::map<std::pair<int, int>, mpq_class> terms;

  static Expr constant(const mpq_class& c);
  static Expr var_x();
  static Expr var_t();

  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator-() const;
  Expr operator*(const Expr& o) const;
  Expr pow(int e) const;

  bool is_zero() const { return terms.empty(); }
  int degree_x() const;
  int degree_t() const;
  bool is_constant() const { return degree_x() <= 0 && degree_t() <= 0; }
  mpq_class constant_value() const;
  // Coefficient of x^i, a polynomial in t.
  Expr coeff_x(int i) const;
  std::string str() const;
};

// Grammar: sums of products of factors; factors are integers, x, t and
// parenthesized expressions, optionally raised to a nonnegative integer power.
// Adjacent factors multiply. Division is allowed by nonzero rational constants.
Expr parse_expr(const std::string& text);

// Image of the global variable t in a local field, with its description.
struct LocalEmbedding {
  Base F;
  Elem t;
  std::string place;
};

// The p-adic field Q_p; t is not allowed.
LocalEmbedding padic_embedding(std::uint64_t p, long precision);
// The completion of F_q(t) at the place given by a monic irreducible
// polynomial in t (the uniformizer is that polynomial; "t" gives F_q((t))).
LocalEmbedding laurent_embedding(std::uint64_t q, const std::string& place, long precision);

Elem to_elem(const Expr& e, const LocalEmbedding& L);
Poly to_poly(const Expr& e, const LocalEmbedding& L);

}  // namespace neron
