// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#include "neron/valfield.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace neron {

namespace {

long sat_add(long a, long b) {
  if (a >= kInfinity || b >= kInfinity) return kInfinity;
  long s = a + b;
  return s >= kInfinity ? kInfinity : s;
}

long checked(__int128 v) {
  if (v > static_cast<__int128>(kInfinity) || v < -static_cast<__int128>(kInfinity))
    throw std::overflow_error("rational overflow");
  return static_cast<long>(v);
}

mpz_class p_power(std::uint64_t p, long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

using TPoly = std::vector<std::uint64_t>;

void ttrim(TPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

}  // namespace

// ---------------------------------------------------------------- Rational

Rational::Rational(long n, long d) {
  if (d == 0) throw std::domain_error("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  long g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

bool Rational::operator<(const Rational& o) const {
  return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

Rational Rational::operator+(const Rational& o) const {
  __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
  __int128 d = static_cast<__int128>(den) * o.den;
  __int128 a = n < 0 ? -n : n, b = d;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a == 0) a = 1;
  return Rational(checked(n / a), checked(d / a));
}

Rational Rational::operator*(const Rational& o) const {
  __int128 n = static_cast<__int128>(num) * o.num;
  __int128 d = static_cast<__int128>(den) * o.den;
  __int128 a = n < 0 ? -n : n, b = d;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a == 0) a = 1;
  return Rational(checked(n / a), checked(d / a));
}

long Rational::floor() const {
  long q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

long Rational::ceil() const { return -Rational(-num, den).floor(); }

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

// ---------------------------------------------------------------- BaseField

std::uint64_t BaseField::q() const {
  std::uint64_t r = 1;
  for (int i = 0; i < base_degree; ++i) r *= p;
  return r;
}

std::string BaseField::name() const {
  std::string base = kind == FieldKind::PAdic ? "Q_" + std::to_string(p) : "F_" + std::to_string(q()) + "((t))";
  if (relative_degree() == 1) return base;
  return base + "^ur(" + std::to_string(relative_degree()) + ")";
}

Coef BaseField::zero() const { return Coef{}; }

Coef BaseField::one() const { return from_long(1); }

Coef BaseField::from_long(long v) const {
  Coef c;
  if (kind == FieldKind::PAdic) {
    c.z = v;
  } else {
    long m = v % static_cast<long>(p);
    if (m < 0) m += static_cast<long>(p);
    if (m != 0) c.t = {static_cast<std::uint64_t>(m)};
  }
  return c;
}

Coef BaseField::from_mpz(const mpz_class& v) const {
  Coef c;
  if (kind == FieldKind::PAdic) {
    c.z = v;
  } else {
    mpz_class m;
    mpz_fdiv_r_ui(m.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p));
    if (m != 0) c.t = {m.get_ui()};
  }
  return c;
}

bool BaseField::is_zero(const Coef& a) const { return kind == FieldKind::PAdic ? a.z == 0 : a.t.empty(); }

Coef BaseField::add(const Coef& a, const Coef& b) const {
  Coef r;
  if (kind == FieldKind::PAdic) {
    r.z = a.z + b.z;
    return r;
  }
  r.t.assign(std::max(a.t.size(), b.t.size()), 0);
  for (std::size_t i = 0; i < a.t.size(); ++i) r.t[i] = a.t[i];
  for (std::size_t i = 0; i < b.t.size(); ++i) r.t[i] = (r.t[i] + b.t[i]) % p;
  ttrim(r.t);
  return r;
}

Coef BaseField::neg(const Coef& a) const {
  Coef r;
  if (kind == FieldKind::PAdic) {
    r.z = -a.z;
    return r;
  }
  r.t = a.t;
  for (auto& v : r.t) v = v == 0 ? 0 : p - v;
  return r;
}

Coef BaseField::sub(const Coef& a, const Coef& b) const { return add(a, neg(b)); }

Coef BaseField::mul(const Coef& a, const Coef& b) const {
  Coef r;
  if (kind == FieldKind::PAdic) {
    r.z = a.z * b.z;
    return r;
  }
  if (a.t.empty() || b.t.empty()) return r;
  r.t.assign(a.t.size() + b.t.size() - 1, 0);
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    if (a.t[i] == 0) continue;
    for (std::size_t j = 0; j < b.t.size(); ++j)
      r.t[i + j] = static_cast<std::uint64_t>((r.t[i + j] + static_cast<unsigned __int128>(a.t[i]) * b.t[j]) % p);
  }
  ttrim(r.t);
  return r;
}

Coef BaseField::divexact(const Coef& a, const Coef& b) const {
  Coef r;
  if (kind == FieldKind::PAdic) {
    mpz_divexact(r.z.get_mpz_t(), a.z.get_mpz_t(), b.z.get_mpz_t());
    return r;
  }
  if (b.t.empty()) throw std::domain_error("division by zero polynomial");
  TPoly rem = a.t;
  const std::size_t db = b.t.size() - 1;
  if (rem.size() < b.t.size()) {
    if (!rem.empty()) throw std::logic_error("inexact polynomial division");
    return r;
  }
  FiniteField Fp(p, 1);
  const std::uint64_t li = Fp.invmod(b.t.back());
  r.t.assign(rem.size() - db, 0);
  for (std::size_t k = rem.size(); k-- > db;) {
    std::uint64_t c = Fp.mulmod(rem[k], li);
    r.t[k - db] = c;
    if (c == 0) continue;
    for (std::size_t i = 0; i <= db; ++i) {
      std::uint64_t s = Fp.mulmod(c, b.t[i]);
      rem[k - db + i] = rem[k - db + i] >= s ? rem[k - db + i] - s : rem[k - db + i] + p - s;
    }
  }
  ttrim(rem);
  if (!rem.empty()) throw std::logic_error("inexact polynomial division");
  ttrim(r.t);
  return r;
}

long BaseField::val(const Coef& a) const {
  if (is_zero(a)) return kInfinity;
  if (kind == FieldKind::PAdic) {
    if (p == 2) return static_cast<long>(mpz_scan1(a.z.get_mpz_t(), 0));
    mpz_class tmp;
    mpz_class pp(static_cast<unsigned long>(p));
    return static_cast<long>(mpz_remove(tmp.get_mpz_t(), a.z.get_mpz_t(), pp.get_mpz_t()));
  }
  long i = 0;
  while (a.t[i] == 0) ++i;
  return i;
}

Coef BaseField::shift_down(const Coef& a, long k) const {
  if (k == 0) return a;
  Coef r;
  if (kind == FieldKind::PAdic) {
    mpz_divexact(r.z.get_mpz_t(), a.z.get_mpz_t(), p_power(p, k).get_mpz_t());
    return r;
  }
  if (static_cast<long>(a.t.size()) > k) r.t.assign(a.t.begin() + k, a.t.end());
  return r;
}

Coef BaseField::shift_up(const Coef& a, long k) const {
  if (k == 0 || is_zero(a)) return a;
  Coef r;
  if (kind == FieldKind::PAdic) {
    r.z = a.z * p_power(p, k);
    return r;
  }
  r.t.assign(static_cast<std::size_t>(k), 0);
  r.t.insert(r.t.end(), a.t.begin(), a.t.end());
  return r;
}

Coef BaseField::mod_pi(const Coef& a, long k) const {
  Coef r;
  if (k <= 0) return r;
  if (kind == FieldKind::PAdic) {
    mpz_fdiv_r(r.z.get_mpz_t(), a.z.get_mpz_t(), p_power(p, k).get_mpz_t());
    return r;
  }
  r.t.assign(a.t.begin(), a.t.begin() + std::min<long>(k, static_cast<long>(a.t.size())));
  ttrim(r.t);
  return r;
}

std::uint64_t BaseField::residue_of(const Coef& a) const {
  if (kind == FieldKind::PAdic) return mpz_fdiv_ui(a.z.get_mpz_t(), static_cast<unsigned long>(p));
  return a.t.empty() ? 0 : a.t[0];
}

Coef BaseField::inv_mod_pi(const Coef& a, long k) const {
  Coef r;
  if (k <= 0) return r;
  if (kind == FieldKind::PAdic) {
    const mpz_class m = p_power(p, k);
    if (mpz_invert(r.z.get_mpz_t(), a.z.get_mpz_t(), m.get_mpz_t()) == 0)
      throw std::domain_error("non-unit inverted modulo pi^k");
    return r;
  }
  if (a.t.empty() || a.t[0] == 0) throw std::domain_error("non-unit inverted modulo t^k");
  FiniteField Fp(p, 1);
  const std::uint64_t c0 = Fp.invmod(a.t[0]);
  r.t.assign(static_cast<std::size_t>(k), 0);
  for (long i = 0; i < k; ++i) {
    std::uint64_t s = i == 0 ? 1 : 0;
    for (long j = 1; j <= i && j < static_cast<long>(a.t.size()); ++j) {
      std::uint64_t m = Fp.mulmod(a.t[j], r.t[i - j]);
      s = s >= m ? s - m : s + p - m;
    }
    r.t[i] = Fp.mulmod(s, c0);
  }
  ttrim(r.t);
  return r;
}

Coef BaseField::gcd(const Coef& a, const Coef& b) const {
  Coef r;
  if (kind == FieldKind::PAdic) {
    mpz_gcd(r.z.get_mpz_t(), a.z.get_mpz_t(), b.z.get_mpz_t());
    return r;
  }
  auto fp = finite_field(p, 1);
  FPoly A, B;
  for (auto v : a.t) A.push_back({v});
  for (auto v : b.t) B.push_back({v});
  FPoly g = fpoly::gcd(*fp, A, B);
  for (auto& v : g) r.t.push_back(v[0]);
  return r;
}

Coef BaseField::canonical_unit(const Coef& a) const {
  if (kind == FieldKind::PAdic) return from_long(a.z < 0 ? -1 : 1);
  if (a.t.empty()) return one();
  Coef u;
  u.t = {a.t.back()};
  return u;
}

bool BaseField::equal(const Coef& a, const Coef& b) const {
  return kind == FieldKind::PAdic ? a.z == b.z : a.t == b.t;
}

std::string BaseField::str(const Coef& a) const {
  if (kind == FieldKind::PAdic) return a.z.get_str();
  if (a.t.empty()) return "0";
  std::string out;
  for (std::size_t i = a.t.size(); i-- > 0;) {
    if (a.t[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (i == 0) {
      out += std::to_string(a.t[i]);
    } else {
      if (a.t[i] != 1) out += std::to_string(a.t[i]) + "*";
      out += "t";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

namespace {

std::shared_ptr<BaseField> build_field(FieldKind kind, std::uint64_t p, int k, int level, long precision, int cap) {
  auto F = std::make_shared<BaseField>();
  F->kind = kind;
  F->p = p;
  F->base_degree = k;
  F->level = level;
  F->precision = precision;
  F->tower_cap = cap;
  F->residue = finite_field(p, level);
  for (auto c : F->residue->modulus()) F->modulus.push_back(F->from_long(static_cast<long>(c)));
  if (k > 1) {
    F->base_generator = finite_field(p, k)->embedding_image(*F->residue);
  } else {
    F->base_generator = F->residue->zero();
  }
  return F;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

Base make_padic(std::uint64_t p, long precision, int tower_cap) {
  if (!is_prime(p)) throw InputError("p-adic base needs a prime p, got " + std::to_string(p));
  if (precision < 1) throw InputError("precision must be positive");
  return build_field(FieldKind::PAdic, p, 1, 1, precision, tower_cap);
}

Base make_laurent(std::uint64_t q, long precision, int tower_cap) {
  if (q < 2) throw InputError("Laurent base needs a prime power q");
  std::uint64_t p = 2;
  while (q % p != 0) ++p;
  int k = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  if (r != 1 || !is_prime(p)) throw InputError("q must be a prime power, got " + std::to_string(q));
  if (precision < 1) throw InputError("precision must be positive");
  return build_field(FieldKind::Laurent, p, k, k, precision, tower_cap);
}

Base extend_unramified(const Base& F, int m) {
  if (m < 1) throw std::invalid_argument("extension degree must be positive");
  const int d = F->relative_degree();
  const int nd = std::lcm(d, m);
  if (nd > F->tower_cap)
    throw TowerTooLarge("unramified tower degree " + std::to_string(nd) + " exceeds cap " +
                        std::to_string(F->tower_cap));
  if (nd == d) return F;
  return build_field(F->kind, F->p, F->base_degree, F->base_degree * nd, F->precision, F->tower_cap);
}

Base escalate_precision(const Base& F) {
  if (F->precision >= 512) throw PrecisionCapReached("precision cap 512 reached");
  return with_precision(F, std::min<long>(512, F->precision * 2));
}

Base with_precision(const Base& F, long precision) {
  auto G = std::make_shared<BaseField>(*F);
  G->precision = precision;
  return G;
}

bool same_field(const Base& a, const Base& b) {
  return a->kind == b->kind && a->p == b->p && a->level == b->level && a->base_degree == b->base_degree;
}

// ---------------------------------------------------------------- Elem

Elem::Elem(Base F) : F_(std::move(F)) {
  num_.assign(F_->level, F_->zero());
  den_ = F_->one();
}

Elem Elem::from_long(const Base& F, long v) {
  Elem e(F);
  e.num_[0] = F->from_long(v);
  e.normalize();
  return e;
}

Elem Elem::from_mpz(const Base& F, const mpz_class& v) {
  Elem e(F);
  e.num_[0] = F->from_mpz(v);
  e.normalize();
  return e;
}

Elem Elem::from_coef(const Base& F, const Coef& c) {
  Elem e(F);
  e.num_[0] = c;
  e.normalize();
  return e;
}

Elem Elem::from_coords(const Base& F, std::vector<Coef> coords, Coef den, long shift, long prec) {
  Elem e(F);
  coords.resize(F->level, F->zero());
  e.num_ = std::move(coords);
  e.den_ = std::move(den);
  e.shift_ = shift;
  e.prec_ = prec;
  e.normalize();
  return e;
}

Elem Elem::from_rational(const Base& F, const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  return from_mpz(F, num) / from_mpz(F, den);
}

Elem Elem::pi_power(const Base& F, long k) {
  Elem e = one(F);
  e.shift_ = k;
  return e;
}

Elem Elem::lift(const Base& F, const FiniteField::Elt& r) {
  Elem e(F);
  for (int i = 0; i < F->level; ++i) e.num_[i] = F->from_long(static_cast<long>(r[i]));
  e.normalize();
  return e;
}

Elem Elem::generator(const Base& F) {
  Elem e(F);
  if (F->level > 1)
    e.num_[1] = F->one();
  else
    e.num_[0] = F->zero();
  e.normalize();
  return e;
}

void Elem::normalize() {
  const BaseField& B = *F_;
  bool allzero = std::all_of(num_.begin(), num_.end(), [&](const Coef& c) { return B.is_zero(c); });
  if (is_exact()) {
    if (allzero) {
      zero_ = true;
      shift_ = 0;
      den_ = B.one();
      return;
    }
    zero_ = false;
    long m = kInfinity;
    for (const auto& c : num_) m = std::min(m, B.val(c));
    if (m > 0) {
      for (auto& c : num_) c = B.shift_down(c, m);
      shift_ += m;
    }
    Coef g = den_;
    for (const auto& c : num_) {
      if (!B.is_zero(c)) g = B.gcd(g, c);
    }
    const bool trivial = B.kind == FieldKind::PAdic ? (g.z == 1 || g.z == -1) : g.t.size() <= 1;
    if (!trivial) {
      den_ = B.divexact(den_, g);
      for (auto& c : num_) c = B.divexact(c, g);
    }
    Coef u = B.canonical_unit(den_);
    if (!B.equal(u, B.one())) {
      den_ = B.divexact(den_, u);
      for (auto& c : num_) c = B.divexact(c, u);
    }
    return;
  }
  long r = prec_ - shift_;
  if (!B.equal(den_, B.one())) {
    if (r > 0) {
      Coef dinv = B.inv_mod_pi(den_, r);
      for (auto& c : num_) c = B.mod_pi(B.mul(c, dinv), r);
    }
    den_ = B.one();
  }
  if (r > 0) {
    for (auto& c : num_) c = B.mod_pi(c, r);
    allzero = std::all_of(num_.begin(), num_.end(), [&](const Coef& c) { return B.is_zero(c); });
  }
  if (r <= 0 || allzero) {
    zero_ = true;
    for (auto& c : num_) c = B.zero();
    shift_ = prec_;
    return;
  }
  zero_ = false;
  long m = kInfinity;
  for (const auto& c : num_) m = std::min(m, B.val(c));
  if (m > 0) {
    for (auto& c : num_) c = B.shift_down(c, m);
    shift_ += m;
  }
}

Elem Elem::with(std::vector<Coef> num, Coef den, long shift, long prec) const {
  Elem e(F_);
  e.num_ = std::move(num);
  e.den_ = std::move(den);
  e.shift_ = shift;
  e.prec_ = prec;
  e.normalize();
  return e;
}

long Elem::val() const {
  if (zero_) {
    if (is_exact()) return kInfinity;
    throw PrecisionExhausted("valuation of an element known only to be 0 mod " + F_->uniformizer() + "^" +
                             std::to_string(prec_));
  }
  return shift_;
}

long Elem::val_bound() const {
  if (zero_) return is_exact() ? kInfinity : prec_;
  return shift_;
}

std::vector<Coef> Elem::integral_coords(long k) const {
  const BaseField& B = *F_;
  std::vector<Coef> out(B.level, B.zero());
  if (zero_ || k <= shift_) return out;
  const long r = k - shift_;
  Coef dinv = B.equal(den_, B.one()) ? B.one() : B.inv_mod_pi(den_, r);
  for (int i = 0; i < B.level; ++i) {
    Coef c = B.mod_pi(B.mul(num_[i], dinv), r);
    out[i] = shift_ >= 0 ? B.shift_up(c, shift_) : c;
  }
  if (shift_ < 0) throw std::domain_error("integral coordinates of a non-integral element");
  return out;
}

FiniteField::Elt Elem::residue() const {
  const BaseField& B = *F_;
  if (zero_) {
    if (is_exact() || prec_ >= 1) return B.residue->zero();
    throw PrecisionExhausted("residue of an element with no known digits");
  }
  if (shift_ > 0) return B.residue->zero();
  if (shift_ < 0) throw std::domain_error("residue of a non-integral element");
  return leading_digit();
}

FiniteField::Elt Elem::leading_digit() const {
  const BaseField& B = *F_;
  if (zero_) throw PrecisionExhausted("leading digit of a zero element");
  const std::uint64_t d = B.residue_of(den_);
  const std::uint64_t di = B.residue->invmod(d);
  FiniteField::Elt r(B.level);
  for (int i = 0; i < B.level; ++i) r[i] = B.residue->mulmod(B.residue_of(num_[i]), di);
  return r;
}

Elem Elem::operator+(const Elem& o) const {
  if (is_exact_zero()) return o;
  if (o.is_exact_zero()) return *this;
  const BaseField& B = *F_;
  const long prec = std::min(prec_, o.prec_);
  if (prec >= kInfinity) {
    const long s = std::min(shift_, o.shift_);
    std::vector<Coef> num(B.level);
    for (int i = 0; i < B.level; ++i) {
      Coef a = B.shift_up(B.mul(num_[i], o.den_), shift_ - s);
      Coef b = B.shift_up(B.mul(o.num_[i], den_), o.shift_ - s);
      num[i] = B.add(a, b);
    }
    return with(std::move(num), B.mul(den_, o.den_), s, kInfinity);
  }
  const Elem* parts[2] = {this, &o};
  long s = prec;
  for (const Elem* e : parts)
    if (!e->zero_) s = std::min(s, e->shift_);
  std::vector<Coef> num(B.level, B.zero());
  for (const Elem* e : parts) {
    if (e->zero_) continue;
    const long r = prec - e->shift_;
    if (r <= 0) continue;
    Coef dinv = B.equal(e->den_, B.one()) ? B.one() : B.inv_mod_pi(e->den_, r);
    for (int i = 0; i < B.level; ++i) {
      Coef c = B.mod_pi(B.mul(e->num_[i], dinv), r);
      num[i] = B.add(num[i], B.shift_up(c, e->shift_ - s));
    }
  }
  return with(std::move(num), B.one(), s, prec);
}

Elem Elem::operator-() const {
  if (is_exact_zero()) return *this;
  Elem r = *this;
  for (auto& c : r.num_) c = F_->neg(c);
  return r;
}

Elem Elem::operator-(const Elem& o) const { return *this + (-o); }

namespace {

std::vector<Coef> mulmod_coords(const BaseField& B, const std::vector<Coef>& a, const std::vector<Coef>& b) {
  const int n = B.level;
  if (n == 1) return {B.mul(a[0], b[0])};
  std::vector<Coef> prod(2 * n - 1, B.zero());
  for (int i = 0; i < n; ++i) {
    if (B.is_zero(a[i])) continue;
    for (int j = 0; j < n; ++j) {
      if (B.is_zero(b[j])) continue;
      prod[i + j] = B.add(prod[i + j], B.mul(a[i], b[j]));
    }
  }
  for (int k = 2 * n - 2; k >= n; --k) {
    if (B.is_zero(prod[k])) continue;
    Coef c = prod[k];
    prod[k] = B.zero();
    for (int i = 0; i < n; ++i) {
      if (B.is_zero(B.modulus[i])) continue;
      prod[k - n + i] = B.sub(prod[k - n + i], B.mul(c, B.modulus[i]));
    }
  }
  prod.resize(n);
  return prod;
}

Coef bareiss_det(const BaseField& B, std::vector<std::vector<Coef>> M) {
  const int n = static_cast<int>(M.size());
  Coef prev = B.one();
  bool negate = false;
  for (int k = 0; k < n - 1; ++k) {
    if (B.is_zero(M[k][k])) {
      int r = k + 1;
      while (r < n && B.is_zero(M[r][k])) ++r;
      if (r == n) return B.zero();
      std::swap(M[k], M[r]);
      negate = !negate;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Coef v = B.sub(B.mul(M[i][j], M[k][k]), B.mul(M[i][k], M[k][j]));
        M[i][j] = B.divexact(v, prev);
      }
    }
    prev = M[k][k];
  }
  Coef d = M[n - 1][n - 1];
  return negate ? B.neg(d) : d;
}

// Returns (adjugate column solving M v = e_0 times det, det) for the
// multiplication-by-u matrix.
std::pair<std::vector<Coef>, Coef> unit_inverse(const BaseField& B, const std::vector<Coef>& u) {
  const int n = B.level;
  std::vector<std::vector<Coef>> M(n, std::vector<Coef>(n, B.zero()));
  std::vector<Coef> col = u;
  std::vector<Coef> zeta(n, B.zero());
  if (n > 1) zeta[1] = B.one();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) M[i][j] = col[i];
    if (j + 1 < n) col = mulmod_coords(B, col, zeta);
  }
  Coef det = bareiss_det(B, M);
  std::vector<Coef> adj(n);
  for (int k = 0; k < n; ++k) {
    auto Mk = M;
    for (int i = 0; i < n; ++i) Mk[i][k] = i == 0 ? B.one() : B.zero();
    adj[k] = bareiss_det(B, Mk);
  }
  return {adj, det};
}

}  // namespace

Elem Elem::operator*(const Elem& o) const {
  const BaseField& B = *F_;
  if (is_exact_zero() || o.is_exact_zero()) return zero(F_);
  if (is_exact() && o.is_exact()) {
    return with(mulmod_coords(B, num_, o.num_), B.mul(den_, o.den_), shift_ + o.shift_, kInfinity);
  }
  const long va = val_bound(), vb = o.val_bound();
  const long prec = std::min(sat_add(va, o.prec_), sat_add(vb, prec_));
  if (zero_ || o.zero_) {
    Elem z(F_);
    z.prec_ = prec;
    z.shift_ = prec;
    z.zero_ = true;
    return z;
  }
  const long s = shift_ + o.shift_;
  const long r = prec - s;
  if (r <= 0) {
    Elem z(F_);
    z.prec_ = prec;
    z.shift_ = prec;
    z.zero_ = true;
    return z;
  }
  auto rep = [&](const Elem& e) {
    std::vector<Coef> c(B.level);
    Coef dinv = B.equal(e.den_, B.one()) ? B.one() : B.inv_mod_pi(e.den_, r);
    for (int i = 0; i < B.level; ++i) c[i] = B.mod_pi(B.mul(e.num_[i], dinv), r);
    return c;
  };
  return with(mulmod_coords(B, rep(*this), rep(o)), B.one(), s, prec);
}

Elem Elem::inverse() const {
  const BaseField& B = *F_;
  if (zero_) {
    if (is_exact()) throw std::domain_error("inverse of zero");
    throw PrecisionExhausted("inverse of an element known only to precision " + std::to_string(prec_));
  }
  if (is_exact()) {
    if (B.level == 1) return with({den_}, num_[0], -shift_, kInfinity);
    auto [adj, det] = unit_inverse(B, num_);
    for (auto& c : adj) c = B.mul(c, den_);
    return with(std::move(adj), det, -shift_, kInfinity);
  }
  const long r = prec_ - shift_;
  std::vector<Coef> out(B.level);
  if (B.level == 1) {
    out[0] = B.inv_mod_pi(num_[0], r);
  } else {
    auto [adj, det] = unit_inverse(B, num_);
    Coef dinv = B.inv_mod_pi(det, r);
    for (int i = 0; i < B.level; ++i) out[i] = B.mod_pi(B.mul(adj[i], dinv), r);
  }
  return with(std::move(out), B.one(), -shift_, r - shift_);
}

Elem Elem::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Elem result = one(F_);
  Elem base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Elem Elem::mul_pi(long k) const {
  if (is_exact_zero()) return *this;
  Elem r = *this;
  r.shift_ += k;
  if (!is_exact()) r.prec_ += k;
  return r;
}

Elem Elem::truncate(long prec) const {
  if (prec >= prec_) return *this;
  if (is_exact_zero()) {
    Elem z(F_);
    z.prec_ = prec;
    z.shift_ = prec;
    z.zero_ = true;
    return z;
  }
  return with(num_, den_, zero_ ? prec : shift_, prec);
}

bool Elem::equals(const Elem& o) const {
  Elem d = *this - o;
  return d.zero_;
}

std::vector<FiniteField::Elt> Elem::digits(long count) const {
  std::vector<FiniteField::Elt> out;
  Elem r = *this;
  for (long i = 0; i < count; ++i) {
    auto d = r.residue();
    out.push_back(d);
    r = (r - lift(F_, d)).mul_pi(-1);
  }
  return out;
}

namespace {

std::string coords_str(const BaseField& B, const std::vector<Coef>& c) {
  if (B.level == 1) return B.str(c[0]);
  std::string out;
  for (int i = B.level - 1; i >= 0; --i) {
    if (B.is_zero(c[i])) continue;
    std::string s = B.str(c[i]);
    if (!out.empty()) out += " + ";
    const bool compound = s.find(' ') != std::string::npos || s[0] == '-';
    if (i == 0) {
      out += s;
    } else {
      if (s != "1") out += (compound ? "(" + s + ")" : s) + "*";
      out += "z";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string Elem::str() const {
  const BaseField& B = *F_;
  const std::string pi = B.uniformizer();
  if (is_exact_zero()) return "0";
  if (zero_) return "O(" + pi + "^" + std::to_string(prec_) + ")";
  std::vector<Coef> num = num_;
  Coef den = den_;
  if (is_exact()) {
    if (shift_ >= 0) {
      for (auto& c : num) c = B.shift_up(c, shift_);
    } else {
      den = B.shift_up(den, -shift_);
    }
    std::string s = coords_str(B, num);
    const bool unit_den = B.equal(den, B.one());
    if (unit_den) return s;
    const bool compound = s.find(' ') != std::string::npos;
    std::string d = B.str(den);
    if (d.find(' ') != std::string::npos) d = "(" + d + ")";
    return (compound ? "(" + s + ")" : s) + "/" + d;
  }
  std::string s = coords_str(B, num);
  if (s.find(' ') != std::string::npos || s[0] == '-') s = "(" + s + ")";
  if (shift_ != 0) s += "*" + pi + "^" + std::to_string(shift_);
  return s + " + O(" + pi + "^" + std::to_string(prec_) + ")";
}

Elem Elem::reembed(const Base& target) const {
  if (target->kind != F_->kind || target->p != F_->p || target->level % F_->level != 0)
    throw std::invalid_argument("incompatible fields for re-embedding");
  if (target->level == F_->level) {
    Elem e = *this;
    e.F_ = target;
    return e;
  }
  if (F_->level == 1 || F_->kind == FieldKind::Laurent) {
    // Coordinates over the prime ring map through the residue embedding
    // exactly: z_old goes to a constant of the new residue field.
    const BaseField& T = *target;
    Elem gen_img(target);
    if (F_->level > 1) {
      auto img = F_->residue->embedding_image(*T.residue);
      gen_img = lift(target, img);
    }
    Elem acc = zero(target);
    Elem pw = one(target);
    for (int i = 0; i < F_->level; ++i) {
      if (!F_->is_zero(num_[i])) acc = acc + from_coef(target, num_[i]) * pw;
      if (i + 1 < F_->level) pw = pw * gen_img;
    }
    Elem r = acc * from_coef(target, den_).inverse();
    if (zero_) {
      Elem z = zero(target);
      return is_exact() ? z : z.truncate(prec_);
    }
    r = r.mul_pi(shift_);
    return is_exact() ? r : r.truncate(prec_);
  }
  // p-adic coordinates need a p-adic root of the old modulus.
  const long prec = std::min(prec_, target->precision + std::max(0L, -shift_)) ;
  Poly g(target);
  for (const auto& c : F_->modulus) g.c.push_back(from_coef(target, c));
  auto img = F_->residue->embedding_image(*target->residue);
  Elem beta = hensel_root(g, img, std::max(1L, target->precision));
  Elem acc = zero(target);
  Elem pw = one(target);
  for (int i = 0; i < F_->level; ++i) {
    if (!F_->is_zero(num_[i])) acc = acc + from_coef(target, num_[i]) * pw;
    if (i + 1 < F_->level) pw = pw * beta;
  }
  Elem r = (acc * from_coef(target, den_).inverse()).mul_pi(shift_);
  return r.truncate(prec);
}

// ---------------------------------------------------------------- Poly

Poly::Poly(Base f, std::vector<Elem> coeffs) : F(std::move(f)), c(std::move(coeffs)) { trim(); }

Poly Poly::x(const Base& F) { return Poly(F, {Elem::zero(F), Elem::one(F)}); }

Poly Poly::constant(const Elem& a) { return Poly(a.field(), {a}); }

Poly Poly::from_longs(const Base& F, const std::vector<long>& coeffs) {
  std::vector<Elem> c;
  for (long v : coeffs) c.push_back(Elem::from_long(F, v));
  return Poly(F, std::move(c));
}

Elem Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c.size())) return Elem::zero(F);
  return c[i];
}

bool Poly::is_exact() const {
  return std::all_of(c.begin(), c.end(), [](const Elem& e) { return e.is_exact(); });
}

long Poly::precision() const {
  long p = kInfinity;
  for (const auto& e : c) p = std::min(p, e.precision());
  return p;
}

void Poly::trim() {
  while (!c.empty() && c.back().is_exact_zero()) c.pop_back();
}

Poly Poly::operator+(const Poly& o) const {
  Poly r(F);
  r.c.resize(std::max(c.size(), o.c.size()), Elem::zero(F));
  for (std::size_t i = 0; i < c.size(); ++i) r.c[i] = c[i];
  for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] = r.c[i] + o.c[i];
  r.trim();
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r(F);
  r.c.resize(std::max(c.size(), o.c.size()), Elem::zero(F));
  for (std::size_t i = 0; i < c.size(); ++i) r.c[i] = c[i];
  for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] = r.c[i] - o.c[i];
  r.trim();
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r(F);
  if (c.empty() || o.c.empty()) return r;
  r.c.assign(c.size() + o.c.size() - 1, Elem::zero(F));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_exact_zero()) continue;
    for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] = r.c[i + j] + c[i] * o.c[j];
  }
  r.trim();
  return r;
}

Poly Poly::scale(const Elem& a) const {
  Poly r(F);
  for (const auto& e : c) r.c.push_back(e * a);
  r.trim();
  return r;
}

Elem Poly::eval(const Elem& v) const {
  Elem r = Elem::zero(F);
  for (std::size_t i = c.size(); i-- > 0;) r = r * v + c[i];
  return r;
}

Poly Poly::shift_scale(const Elem& a, const Elem& b) const {
  Poly lin(F, {a, b});
  Poly r(F);
  for (std::size_t i = c.size(); i-- > 0;) r = r * lin + Poly::constant(c[i]);
  return r;
}

Poly Poly::reversed() const {
  Poly r(F);
  r.c.assign(c.rbegin(), c.rend());
  r.trim();
  return r;
}

Poly Poly::derivative() const {
  Poly r(F);
  for (std::size_t i = 1; i < c.size(); ++i) r.c.push_back(c[i] * Elem::from_long(F, static_cast<long>(i)));
  r.trim();
  return r;
}

Poly Poly::monic() const {
  if (c.empty()) return *this;
  Elem li = c.back().inverse();
  Poly r = scale(li);
  r.c.back() = Elem::one(F);
  return r;
}

std::pair<Poly, Poly> Poly::divrem(const Poly& d) const {
  if (d.c.empty()) throw std::domain_error("polynomial division by zero");
  Poly r = *this;
  const int dd = d.degree();
  if (r.degree() < dd) return {Poly(F), r};
  Poly q(F);
  q.c.assign(r.c.size() - d.c.size() + 1, Elem::zero(F));
  const Elem li = d.c.back().inverse();
  for (int k = r.degree(); k >= dd; --k) {
    Elem coef = r.c[k] * li;
    q.c[k - dd] = coef;
    for (int i = 0; i <= dd; ++i) r.c[k - dd + i] = r.c[k - dd + i] - coef * d.c[i];
  }
  r.c.resize(dd);
  r.trim();
  q.trim();
  return {q, r};
}

long Poly::min_val() const {
  long m = kInfinity;
  for (const auto& e : c) m = std::min(m, e.val_bound());
  return m;
}

Poly Poly::primitive() const {
  long m = min_val();
  if (m >= kInfinity || m == 0) return *this;
  Poly r(F);
  for (const auto& e : c) r.c.push_back(e.mul_pi(-m));
  return r;
}

Poly Poly::truncate(long prec) const {
  Poly r(F);
  for (const auto& e : c) r.c.push_back(e.truncate(prec));
  return r;
}

Poly Poly::reembed(const Base& target) const {
  Poly r(target);
  for (const auto& e : c) r.c.push_back(e.reembed(target));
  r.trim();
  return r;
}

std::string Poly::str(const std::string& var) const {
  if (c.empty()) return "0";
  std::string out;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i].is_exact_zero()) continue;
    std::string s = c[i].str();
    bool negative = !s.empty() && s[0] == '-' && s.find(' ') == std::string::npos;
    if (negative) s = s.substr(1);
    if (s.find(' ') != std::string::npos && i > 0) s = "(" + s + ")";
    std::string term;
    if (i == 0) {
      term = s;
    } else {
      term = s == "1" ? "" : s + "*";
      term += var;
      if (i > 1) term += "^" + std::to_string(i);
    }
    if (out.empty())
      out = negative ? "-" + term : term;
    else
      out += (negative ? " - " : " + ") + term;
  }
  return out;
}

Poly gcd_exact(const Poly& a, const Poly& b) {
  Poly u = a, v = b;
  while (!v.is_zero()) {
    Poly r = u.divrem(v).second;
    u = v;
    v = r;
  }
  return u.is_zero() ? u : u.monic();
}

Poly pow_poly(const Poly& a, int e) {
  Poly r = Poly::constant(Elem::one(a.F));
  for (int i = 0; i < e; ++i) r = r * a;
  return r;
}

Poly compose(const Poly& outer, const Poly& inner) {
  Poly r(inner.F);
  for (std::size_t i = outer.c.size(); i-- > 0;) r = r * inner + Poly::constant(outer.c[i]);
  return r;
}

// ---------------------------------------------------------------- Newton polygons

std::vector<std::pair<Rational, long>> NewtonPolygon::root_valuations() const {
  std::vector<std::pair<Rational, long>> out;
  for (const auto& s : segments) out.emplace_back(-s.slope, s.length);
  return out;
}

std::string NewtonPolygon::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) os << ", ";
    os << "(" << segments[i].slope.str() << ", " << segments[i].length << ")";
  }
  os << "]";
  if (zero_roots) os << " + " << zero_roots << " zero root(s)";
  return os.str();
}

NewtonPolygon newton_polygon(const Poly& f) {
  if (f.is_zero()) throw std::invalid_argument("Newton polygon of the zero polynomial");
  NewtonPolygon np;
  const int n = f.degree();
  if (f.lead().is_inexact_zero())
    throw PrecisionExhausted("leading coefficient not certified nonzero");
  int i0 = 0;
  while (i0 <= n && f.c[i0].is_exact_zero()) ++i0;
  if (f.c[i0].is_inexact_zero())
    throw PrecisionExhausted("cannot certify whether the constant coefficient vanishes");
  np.zero_roots = i0;
  np.lead_val = f.lead().val();
  std::vector<std::pair<long, long>> pts;
  for (int i = i0; i <= n; ++i) {
    if (f.c[i].certainly_nonzero()) pts.emplace_back(i, f.c[i].val());
  }
  std::vector<std::pair<long, long>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      __int128 cross = static_cast<__int128>(b.first - a.first) * (pt.second - a.second) -
                       static_cast<__int128>(b.second - a.second) * (pt.first - a.first);
      if (cross <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    Segment s;
    s.start = hull[k].first;
    s.start_val = hull[k].second;
    s.length = hull[k + 1].first - hull[k].first;
    s.slope = Rational(hull[k + 1].second - hull[k].second, s.length);
    np.segments.push_back(s);
  }
  // Unknown coefficients must lie strictly above the hull.
  for (int i = i0 + 1; i < n; ++i) {
    if (!f.c[i].is_inexact_zero()) continue;
    for (const auto& s : np.segments) {
      if (i < s.start || i > s.start + s.length) continue;
      Rational line = Rational(s.start_val) + s.slope * Rational(i - s.start);
      if (Rational(f.c[i].precision()) <= line)
        throw PrecisionExhausted("coefficient " + std::to_string(i) + " is not known beyond the polygon");
    }
  }
  return np;
}

FPoly residual_polynomial(const Poly& f, const Rational& slope) {
  NewtonPolygon np = newton_polygon(f);
  const FiniteField& R = *f.F->residue;
  for (const auto& s : np.segments) {
    if (!(s.slope == slope)) continue;
    const long e = slope.den;
    const long h = -slope.num;
    FPoly out;
    for (long j = 0; j * e <= s.length; ++j) {
      const long idx = s.start + j * e;
      const long line = s.start_val - j * h;
      const Elem& c = f.c[idx];
      if (c.is_exact_zero() || c.val_bound() > line) {
        out.push_back(R.zero());
        continue;
      }
      if (c.is_inexact_zero()) throw PrecisionExhausted("residual coefficient not determined");
      out.push_back(c.leading_digit());
    }
    fpoly::trim(R, out);
    return fpoly::monic(R, out);
  }
  throw std::invalid_argument("slope " + slope.str() + " is not a segment slope");
}

FPoly reduce(const Poly& f) {
  const FiniteField& R = *f.F->residue;
  FPoly out;
  for (const auto& e : f.c) out.push_back(e.residue());
  fpoly::trim(R, out);
  return out;
}

Poly lift(const Base& F, const FPoly& f) {
  Poly r(F);
  for (const auto& e : f) r.c.push_back(Elem::lift(F, e));
  r.trim();
  return r;
}

// ---------------------------------------------------------------- linear algebra

Poly charpoly(const Matrix& A, const Base& F) {
  const int n = static_cast<int>(A.size());
  if (n == 0) return Poly::constant(Elem::one(F));
  // Berkowitz: division-free, so absolute precision of integral input is kept.
  std::vector<Elem> V = {Elem::one(F), -A[0][0]};
  for (int r = 1; r < n; ++r) {
    std::vector<Elem> t(r + 2, Elem::zero(F));
    t[0] = Elem::one(F);
    t[1] = -A[r][r];
    std::vector<Elem> X(r);
    for (int i = 0; i < r; ++i) X[i] = A[i][r];
    for (int k = 0; k < r; ++k) {
      Elem dot = Elem::zero(F);
      for (int j = 0; j < r; ++j) dot = dot + A[r][j] * X[j];
      t[k + 2] = -dot;
      if (k + 1 < r) {
        std::vector<Elem> Y(r, Elem::zero(F));
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j) Y[i] = Y[i] + A[i][j] * X[j];
        X = std::move(Y);
      }
    }
    std::vector<Elem> W(r + 2, Elem::zero(F));
    for (int i = 0; i < r + 2; ++i)
      for (int j = 0; j <= std::min(i, r); ++j) W[i] = W[i] + t[i - j] * V[j];
    V = std::move(W);
  }
  Poly out(F);
  for (int i = n; i >= 0; --i) out.c.push_back(V[i]);
  out.c.back() = Elem::one(F);
  return out;
}

namespace {

int pick_pivot(const Matrix& M, int k, int col) {
  int best = -1;
  long bv = kInfinity;
  for (int i = k; i < static_cast<int>(M.size()); ++i) {
    if (!M[i][col].certainly_nonzero()) continue;
    long v = M[i][col].val();
    if (best < 0 || v < bv) {
      best = i;
      bv = v;
    }
  }
  return best;
}

}  // namespace

Elem determinant(Matrix M, const Base& F) {
  const int n = static_cast<int>(M.size());
  Elem det = Elem::one(F);
  for (int k = 0; k < n; ++k) {
    int piv = pick_pivot(M, k, k);
    if (piv < 0) {
      for (int i = k; i < n; ++i)
        if (M[i][k].is_inexact_zero()) throw PrecisionExhausted("determinant pivot undetermined");
      return Elem::zero(F);
    }
    if (piv != k) {
      std::swap(M[piv], M[k]);
      det = -det;
    }
    det = det * M[k][k];
    Elem inv = M[k][k].inverse();
    for (int i = k + 1; i < n; ++i) {
      if (M[i][k].is_exact_zero()) continue;
      Elem f = M[i][k] * inv;
      for (int j = k; j < n; ++j) M[i][j] = M[i][j] - f * M[k][j];
    }
  }
  return det;
}

std::vector<Elem> solve(Matrix M, std::vector<Elem> b, const Base& F) {
  const int n = static_cast<int>(M.size());
  std::vector<int> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  for (int k = 0; k < n; ++k) {
    int br = -1, bc = -1;
    long bv = kInfinity;
    for (int i = k; i < n; ++i) {
      for (int j = k; j < n; ++j) {
        if (!M[i][j].certainly_nonzero()) continue;
        long v = M[i][j].val();
        if (br < 0 || v < bv) {
          br = i;
          bc = j;
          bv = v;
        }
      }
    }
    if (br < 0) {
      for (int i = k; i < n; ++i)
        for (int j = k; j < n; ++j)
          if (M[i][j].is_inexact_zero()) throw PrecisionExhausted("linear system pivot undetermined");
      throw std::domain_error("singular linear system");
    }
    std::swap(M[br], M[k]);
    std::swap(b[br], b[k]);
    if (bc != k) {
      for (int i = 0; i < n; ++i) std::swap(M[i][bc], M[i][k]);
      std::swap(cols[bc], cols[k]);
    }
    Elem inv = M[k][k].inverse();
    for (int i = k + 1; i < n; ++i) {
      if (M[i][k].is_exact_zero()) continue;
      Elem f = M[i][k] * inv;
      for (int j = k; j < n; ++j) M[i][j] = M[i][j] - f * M[k][j];
      b[i] = b[i] - f * b[k];
    }
  }
  std::vector<Elem> y(n, Elem::zero(F));
  for (int k = n - 1; k >= 0; --k) {
    Elem s = b[k];
    for (int j = k + 1; j < n; ++j) s = s - M[k][j] * y[j];
    y[k] = s / M[k][k];
  }
  std::vector<Elem> x(n, Elem::zero(F));
  for (int k = 0; k < n; ++k) x[cols[k]] = y[k];
  return x;
}

// ---------------------------------------------------------------- Hensel lifting

namespace {

Poly resize_poly(Poly p, std::size_t size) {
  if (p.c.size() > size) p.c.resize(size);
  p.trim();
  return p;
}

}  // namespace

HenselResult hensel_lift(const Poly& f0, const FPoly& g0, const FPoly& h0, long prec) {
  const Base& F = f0.F;
  const FiniteField& R = *F->residue;
  auto [one, s0, t0] = fpoly::xgcd(R, g0, h0);
  if (fpoly::degree(one) != 0) throw std::invalid_argument("Hensel factors are not coprime");
  const std::size_t dg = g0.size() - 1, dh = h0.size() - 1;
  Poly f = f0.truncate(prec);
  Poly g = lift(F, g0).truncate(prec), h = lift(F, h0).truncate(prec);
  Poly s = lift(F, s0).truncate(prec), t = lift(F, t0).truncate(prec);
  Poly unit = Poly::constant(Elem::one(F));
  long reached = 1;
  while (reached < prec) {
    Poly e = f - g * h;
    auto [q, r] = (s * e).divrem(h);
    Poly g1 = resize_poly(g + t * e + q * g, dg + 1);
    g1.c.resize(dg + 1, Elem::zero(F));
    g1.c[dg] = Elem::one(F);
    Poly h1 = resize_poly(h + r, dh + 1);
    h1.c.resize(dh + 1, Elem::zero(F));
    h1.c[dh] = Elem::one(F);
    Poly b = s * g1 + t * h1 - unit;
    auto [c, d] = (s * b).divrem(h1);
    s = resize_poly(s - d, dh);
    t = resize_poly(t - t * b - c * g1, dg);
    g = g1.truncate(prec);
    h = h1.truncate(prec);
    s = s.truncate(prec);
    t = t.truncate(prec);
    reached *= 2;
  }
  // Certify the lifted precision actually matches what f supports.
  const long fp = std::min(prec, f0.precision());
  return {g.truncate(fp), h.truncate(fp), s.truncate(fp), t.truncate(fp)};
}

Elem hensel_root(const Poly& f, const FiniteField::Elt& r, long prec) {
  const Base& F = f.F;
  Poly df = f.derivative();
  Elem x = Elem::lift(F, r).truncate(prec);
  if (df.eval(x).val() != 0) throw std::invalid_argument("Hensel root of a non-simple residue root");
  long reached = 1;
  while (reached < prec) {
    x = (x - f.eval(x) / df.eval(x)).truncate(prec);
    reached *= 2;
  }
  x = (x - f.eval(x) / df.eval(x)).truncate(std::min(prec, f.precision()));
  return x;
}

}  // namespace neron
