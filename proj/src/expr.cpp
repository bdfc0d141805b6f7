// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#include "neron/expr.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

namespace neron {

Expr Expr::constant(const mpq_class& c) {
  Expr e;
  if (c != 0) e.terms[{0, 0}] = c;
  return e;
}

Expr Expr::var_x() {
  Expr e;
  e.terms[{1, 0}] = 1;
  return e;
}

Expr Expr::var_t() {
  Expr e;
  e.terms[{0, 1}] = 1;
  return e;
}

Expr Expr::operator+(const Expr& o) const {
  Expr r = *this;
  for (const auto& [k, v] : o.terms) {
    mpq_class s = r.terms[k] + v;
    if (s == 0)
      r.terms.erase(k);
    else
      r.terms[k] = s;
  }
  return r;
}

Expr Expr::operator-() const {
  Expr r = *this;
  for (auto& [k, v] : r.terms) v = -v;
  return r;
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

Expr Expr::operator*(const Expr& o) const {
  Expr r;
  for (const auto& [ka, va] : terms)
    for (const auto& [kb, vb] : o.terms) r = r + Expr{{{{ka.first + kb.first, ka.second + kb.second}, va * vb}}};
  return r;
}

Expr Expr::pow(int e) const {
  Expr r = constant(1), b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

int Expr::degree_x() const {
  int d = -1;
  for (const auto& [k, v] : terms) d = std::max(d, k.first);
  return d;
}

int Expr::degree_t() const {
  int d = -1;
  for (const auto& [k, v] : terms) d = std::max(d, k.second);
  return d;
}

mpq_class Expr::constant_value() const {
  if (!is_constant()) throw InputError("expected a constant, got " + str());
  auto it = terms.find({0, 0});
  return it == terms.end() ? mpq_class(0) : it->second;
}

Expr Expr::coeff_x(int i) const {
  Expr r;
  for (const auto& [k, v] : terms)
    if (k.first == i) r.terms[{0, k.second}] = v;
  return r;
}

std::string Expr::str() const {
  if (terms.empty()) return "0";
  std::ostringstream o;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto [dx, dt] = it->first;
    mpq_class c = it->second;
    const bool neg = c < 0;
    if (neg) c = -c;
    o << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    const bool unit = c == 1;
    if (!unit || (dx == 0 && dt == 0)) o << c.get_str();
    auto var = [&](char v, int d, bool lead) {
      if (d == 0) return;
      if (!lead) o << "*";
      o << v;
      if (d > 1) o << "^" << d;
    };
    var('x', dx, unit);
    var('t', dt, unit && dx == 0);
  }
  return o.str();
}

namespace {

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  Expr parse() {
    Expr e = sum();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cannot parse \"" + s_ + "\" at column " + std::to_string(i_ + 1) + ": " + what);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }

  bool starts_factor() {
    skip();
    if (i_ >= s_.size()) return false;
    const char c = s_[i_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'x' || c == 't' || c == '(';
  }

  Expr sum() {
    Expr e = product();
    while (peek('+') || peek('-')) {
      const bool minus = s_[i_++] == '-';
      Expr r = product();
      e = minus ? e - r : e + r;
    }
    return e;
  }

  Expr signed_power() {
    if (peek('+') || peek('-')) {
      const bool minus = s_[i_++] == '-';
      Expr e = signed_power();
      return minus ? -e : e;
    }
    return power();
  }

  Expr product() {
    Expr e = signed_power();
    for (;;) {
      if (peek('*')) {
        ++i_;
        e = e * signed_power();
      } else if (peek('/')) {
        ++i_;
        Expr d = signed_power();
        if (!d.is_constant() || d.is_zero()) fail("division is only allowed by nonzero constants");
        e = e * Expr::constant(1 / d.constant_value());
      } else if (starts_factor()) {
        e = e * power();
      } else {
        return e;
      }
    }
  }

  Expr power() {
    Expr b = atom();
    if (peek('^')) {
      ++i_;
      skip();
      const std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (start == i_) fail("exponent must be a nonnegative integer");
      const std::string digits = s_.substr(start, i_ - start);
      if (digits.size() > 4) fail("exponent too large");
      b = b.pow(std::stoi(digits));
    }
    return b;
  }

  Expr atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[i_];
    if (c == '(') {
      ++i_;
      Expr e = sum();
      if (!peek(')')) fail("missing ')'");
      ++i_;
      return e;
    }
    if (c == 'x' || c == 't') {
      ++i_;
      if (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_]))) fail("unknown identifier");
      return c == 'x' ? Expr::var_x() : Expr::var_t();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return Expr::constant(mpq_class(mpz_class(s_.substr(start, i_ - start))));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

long reduce_mod(const mpq_class& c, std::uint64_t p) {
  const mpz_class m(static_cast<unsigned long>(p));
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), c.get_den().get_mpz_t(), m.get_mpz_t()) == 0)
    throw InputError("coefficient " + c.get_str() + " has a denominator divisible by " + std::to_string(p));
  mpz_class v = mpz_class(c.get_num() * inv) % m;
  if (v < 0) v += m;
  return v.get_si();
}

}  // namespace

Expr parse_expr(const std::string& text) { return Parser(text).parse(); }

LocalEmbedding padic_embedding(std::uint64_t p, long precision) {
  LocalEmbedding L;
  L.F = make_padic(p, precision);
  L.place = std::to_string(p);
  return L;
}

LocalEmbedding laurent_embedding(std::uint64_t q, const std::string& place, long precision) {
  LocalEmbedding L;
  Base F = make_laurent(q, precision);
  const Expr P = parse_expr(place);
  if (P.degree_x() > 0 || P.degree_t() < 1) throw InputError("place must be a polynomial in t, got " + place);
  const std::uint64_t p = F->p;
  const FiniteField& Fp = *finite_field(p, 1);
  FPoly Pbar;
  for (int j = 0; j <= P.degree_t(); ++j) {
    auto it = P.terms.find({0, j});
    const mpq_class c = it == P.terms.end() ? mpq_class(0) : it->second;
    const long v = reduce_mod(c, p);
    Pbar.push_back(Fp.from_int(v));
  }
  fpoly::trim(Fp, Pbar);
  if (fpoly::degree(Pbar) < 1 || !Fp.is_one(Pbar.back()))
    throw InputError("place must be a monic polynomial in t, got " + place);
  if (!fpoly::is_irreducible(Fp, Pbar)) throw InputError("place must be irreducible, got " + place);
  const int d = fpoly::degree(Pbar);
  // Irreducible over F_p of degree d; it stays irreducible over F_q only when
  // gcd(d, k) = 1, which the single-place description requires.
  if (std::gcd(d, F->base_degree) != 1) throw UnsupportedInput("place " + place + " splits over F_" + std::to_string(q));
  if (d > 1) F = extend_unramified(F, d);
  L.F = F;
  L.place = fpoly::to_string(Fp, Pbar, "t");
  Poly Pk(F);
  for (const auto& c : Pbar) Pk.c.push_back(Elem::from_long(F, static_cast<long>(c[0])));
  Pk.c[0] = Pk.c[0] - Elem::pi_power(F, 1);
  if (d == 1) {
    L.t = -Pk.c[0];
  } else {
    const FiniteField& R = *F->residue;
    FPoly Pr;
    for (const auto& c : Pbar) Pr.push_back(R.from_int(static_cast<long long>(c[0])));
    auto rts = fpoly::roots(R, Pr);
    L.t = hensel_root(Pk, rts.front().first, F->precision);
  }
  return L;
}

Elem to_elem(const Expr& e, const LocalEmbedding& L) {
  if (e.degree_x() > 0) throw InputError("expected a constant in t, got " + e.str());
  if (L.F->kind == FieldKind::PAdic && e.degree_t() > 0) throw InputError("t is not defined over " + L.F->name());
  Elem r = Elem::zero(L.F);
  for (int j = e.degree_t(); j >= 0; --j) {
    auto it = e.terms.find({0, j});
    Elem c = Elem::zero(L.F);
    if (it != e.terms.end()) {
      const mpz_class den = it->second.get_den();
      if (L.F->kind == FieldKind::Laurent && den % L.F->p == 0)
        throw InputError("coefficient " + it->second.get_str() + " has a denominator divisible by the characteristic");
      c = Elem::from_rational(L.F, it->second.get_num(), den);
    }
    r = j == e.degree_t() ? c : r * L.t + c;
  }
  return r;
}

Poly to_poly(const Expr& e, const LocalEmbedding& L) {
  Poly f(L.F);
  for (int i = 0; i <= e.degree_x(); ++i) f.c.push_back(to_elem(e.coeff_x(i), L));
  f.trim();
  return f;
}

}  // namespace neron
