// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#include "neron/boundary.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace neron {

namespace {

// K[x]/(g) for monic g, elements as polynomials of degree < n.
struct Algebra {
  Poly g;
  Base F;
  int n;

  explicit Algebra(Poly gg) : g(std::move(gg)), F(g.F), n(g.degree()) {}

  Poly reduce(const Poly& a) const {
    if (a.degree() < n) return a;
    return a.divrem(g).second;
  }
  Poly mul(const Poly& a, const Poly& b) const { return reduce(a * b); }
  Poly one() const { return Poly::constant(Elem::one(F)); }
  Poly x() const { return reduce(Poly::x(F)); }

  Poly charpoly(const Poly& th) const {
    Matrix M(n, std::vector<Elem>(n, Elem::zero(F)));
    Poly col = reduce(th);
    Poly X = x();
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) M[i][j] = col.coeff(i);
      if (j + 1 < n) col = mul(col, X);
    }
    return neron::charpoly(M, F);
  }

  // Cayley-Hamilton inverse.
  Poly inverse(const Poly& th) const {
    Poly chi = charpoly(th);
    const Elem c0 = chi.coeff(0);
    if (c0.is_exact_zero()) throw std::domain_error("zero divisor in algebra");
    // th * (th^{n-1} + c_{n-1} th^{n-2} + ... + c_1) = -c0
    Poly q = Poly::constant(chi.coeff(n));
    for (int i = n - 1; i >= 1; --i) q = reduce(mul(q, th) + Poly::constant(chi.coeff(i)));
    return q.scale(-c0.inverse());
  }

  Poly pow(const Poly& th, long e) const {
    if (e < 0) return pow(inverse(th), -e);
    Poly r = one(), b = reduce(th);
    while (e > 0) {
      if (e & 1) r = mul(r, b);
      e >>= 1;
      if (e > 0) b = mul(b, b);
    }
    return r;
  }

  Poly eval(const Poly& P, const Poly& th) const {
    Poly r(F);
    for (std::size_t i = P.c.size(); i-- > 0;) r = reduce(mul(r, th) + Poly::constant(P.c[i]));
    return r;
  }
};

std::tuple<long, long, long> ext_gcd(long a, long b) {
  if (b == 0) return {a, 1, 0};
  auto [g, x, y] = ext_gcd(b, a % b);
  return {g, y, x - (a / b) * y};
}

Poly drop_low(const Poly& p, int k) {
  Poly r(p.F);
  for (int i = k; i <= p.degree(); ++i) r.c.push_back(p.c[i]);
  r.c.back() = Elem::one(p.F);
  return r;
}

// Exact version of an inexact monic factor h of the exact polynomial g.
std::optional<Poly> recognize_factor(const Poly& h, const Poly& g) {
  if (!g.is_exact()) return std::nullopt;
  Poly r(h.F);
  for (const auto& c : h.c) {
    if (c.is_exact()) {
      r.c.push_back(c);
      continue;
    }
    auto e = recognize(c);
    if (!e) return std::nullopt;
    r.c.push_back(*e);
  }
  r.trim();
  if (r.degree() != h.degree()) return std::nullopt;
  if (!g.divrem(r).second.is_zero()) return std::nullopt;
  return r;
}

std::vector<Factor> factor_rec(const Poly& g, int depth);

std::vector<Factor> split_by(const Algebra& A, const Poly& gamma, const FPoly& R1, const FPoly& R2, int depth) {
  const Base& F = A.F;
  const int n1 = fpoly::degree(R1), n2 = fpoly::degree(R2);
  Poly chi = A.charpoly(gamma);
  const long prec = F->precision;
  HenselResult hl = hensel_lift(chi, R1, R2, prec);
  Poly e1 = A.eval(hl.t * hl.h, gamma);
  Poly e2 = A.one() - e1;
  Poly g1 = drop_low(A.charpoly(A.mul(A.x(), e1)), n2);
  Poly g2;
  if (auto ex = recognize_factor(g1, A.g)) {
    g1 = *ex;
    g2 = A.g.divrem(g1).first;
  } else {
    g2 = drop_low(A.charpoly(A.mul(A.x(), e2)), n1);
    if (auto ex2 = recognize_factor(g2, A.g)) {
      g2 = *ex2;
      g1 = A.g.divrem(g2).first;
    }
  }
  auto a = factor_rec(g1, depth + 1);
  auto b = factor_rec(g2, depth + 1);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Factor> factor_rec(const Poly& g, int depth) {
  const Base& F = g.F;
  const int n = g.degree();
  if (n <= 0) return {};
  if (n == 1) return {{g, 1, 1}};
  if (depth > 64) throw std::logic_error("factorization recursion too deep");
  if (g.coeff(0).is_exact_zero()) {
    Poly rest(F);
    for (int i = 1; i <= n; ++i) rest.c.push_back(g.c[i]);
    auto out = factor_rec(rest, depth + 1);
    out.insert(out.begin(), Factor{Poly::x(F), 1, 1});
    return out;
  }
  Algebra A(g);
  const FiniteField& R = *F->residue;
  Poly theta = A.x();
  Poly Pi = Poly::constant(Elem::pi_power(F, 1));
  long E = 1, Fd = 1;
  std::vector<Poly> units;
  for (int iter = 0; iter < 4096; ++iter) {
    Poly chi = A.charpoly(theta);
    NewtonPolygon np = newton_polygon(chi);
    if (np.zero_roots == n) throw std::logic_error("degenerate element in factorization");
    if (np.zero_roots > 0 || np.segments.size() >= 2) {
      // Separate roots by the valuation of theta at them.
      auto rv = np.root_valuations();  // decreasing
      Rational cut = np.zero_roots > 0 ? rv.front().first + Rational(1) : (rv[0].first + rv[1].first) * Rational(1, 2);
      Poly thb = A.pow(theta, cut.den);
      Poly denom = A.one() + thb.scale(Elem::pi_power(F, -cut.num));
      Poly gamma = A.inverse(denom);
      long above = np.zero_roots;
      for (auto& [v, len] : rv)
        if (cut < v) above += len;
      FPoly R1 = fpoly::constant(R, R.one());
      for (long i = 0; i < above; ++i) R1 = fpoly::mul(R, R1, FPoly{R.neg(R.one()), R.one()});
      FPoly R2 = fpoly::constant(R, R.one());
      for (long i = 0; i < n - above; ++i) R2 = fpoly::mul(R, R2, fpoly::x(R));
      return split_by(A, gamma, R1, R2, depth);
    }
    const Rational lam = -np.segments[0].slope;
    const long a = lam.num, b = lam.den;
    const long gE = std::gcd(b, E);
    const long k = b / gE;
    const long E2 = E * k;
    const long A2 = a * (E2 / b);
    Poly Pi2 = Pi;
    if (k > 1) {
      auto [gg, s, t] = ext_gcd(a * (E / gE), k);
      if (gg < 0) {
        s = -s;
        t = -t;
      }
      Pi2 = A.mul(A.pow(theta, s), A.pow(Pi, t));
    }
    Poly gamma = A.mul(theta, A.pow(Pi2, -A2));
    Poly chig = A.charpoly(gamma);
    FPoly Rg = reduce(chig);
    auto fac = fpoly::factor(R, Rg);
    if (fac.size() >= 2) {
      FPoly R1 = fpoly::constant(R, R.one());
      for (int i = 0; i < fac[0].second; ++i) R1 = fpoly::mul(R, R1, fac[0].first);
      FPoly R2 = fpoly::divrem(R, Rg, R1).first;
      return split_by(A, gamma, R1, R2, depth);
    }
    // Roots may agree in the residue of gamma up to conjugation but differ
    // in the tuple of residues of all units seen so far.
    units.push_back(gamma);
    if (units.size() >= 2) {
      std::mt19937 rng(static_cast<std::uint32_t>(1000 * depth + iter));
      const long pr = static_cast<long>(std::min<std::uint64_t>(R.p(), 1u << 20));
      for (int attempt = 0; attempt < 8; ++attempt) {
        Poly delta(F);
        for (std::size_t i = 0; i < units.size(); ++i) {
          delta = delta + units[i].scale(Elem::from_long(F, static_cast<long>(rng() % pr)));
          for (std::size_t j = i; j < units.size() && attempt >= 2; ++j)
            delta = delta + A.mul(units[i], units[j]).scale(Elem::from_long(F, static_cast<long>(rng() % pr)));
        }
        FPoly Rd = reduce(A.charpoly(delta));
        auto fd = fpoly::factor(R, Rd);
        if (fd.size() < 2) continue;
        FPoly R1 = fpoly::constant(R, R.one());
        for (int i = 0; i < fd[0].second; ++i) R1 = fpoly::mul(R, R1, fd[0].first);
        FPoly R2 = fpoly::divrem(R, Rd, R1).first;
        return split_by(A, delta, R1, R2, depth);
      }
    }
    const FPoly& psi = fac[0].first;
    const long F2 = std::lcm(Fd, static_cast<long>(fpoly::degree(psi)));
    if (E2 * F2 == n) return {{g, static_cast<int>(E2), static_cast<int>(F2)}};
    theta = A.eval(lift(F, psi), gamma);
    E = E2;
    Fd = F2;
    Pi = Pi2;
  }
  throw std::logic_error("factorization did not converge");
}

bool sort_before(const Factor& a, const Factor& b) {
  if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
  return a.poly.str() < b.poly.str();
}

// Monic integral g(y) = a^{n-1} f(y/a) for primitive f with leading coefficient a.
Poly monicize(const Poly& f) {
  Poly fp = f.primitive();
  const int n = fp.degree();
  const Elem an = fp.lead();
  Poly g(fp.F);
  Elem pw = Elem::one(fp.F);
  std::vector<Elem> c(n + 1);
  for (int i = n - 1; i >= 0; --i) {
    c[i] = fp.c[i] * pw;
    pw = pw * an;
  }
  c[n] = Elem::one(fp.F);
  g.c = std::move(c);
  return g;
}

// G(a x) / a^{deg G}
Poly unmonicize(const Poly& G, const Elem& a) {
  const int d = G.degree();
  Poly r(G.F);
  for (int i = 0; i <= d; ++i) r.c.push_back(G.c[i] * a.pow(i - d));
  r.c.back() = Elem::one(G.F);
  return r;
}

// Coordinates of an exact Laurent element as polynomials: is it a p-th power?
bool is_pth_power(const Elem& c) {
  const BaseField& B = *c.field();
  if (c.is_exact_zero()) return true;
  if (B.kind != FieldKind::Laurent) return false;
  if (c.shift() % static_cast<long>(B.p) != 0) return false;
  // c = num / den; num * den^{p-1} / den^p is a p-th power iff the numerator is.
  Coef dp = B.one();
  for (std::uint64_t i = 0; i + 1 < B.p; ++i) dp = B.mul(dp, c.den());
  for (const auto& x : c.num()) {
    Coef y = B.mul(x, dp);
    for (std::size_t i = 0; i < y.t.size(); ++i)
      if (y.t[i] != 0 && i % B.p != 0) return false;
  }
  return true;
}

// For f with f' = 0 in characteristic p, writes f = h(x^{p^j}) with h' != 0.
std::pair<Poly, long> inseparable_part(const Poly& f) {
  const long p = static_cast<long>(f.F->p);
  Poly h = f;
  long pj = 1;
  while (h.degree() > 0 && h.derivative().is_zero()) {
    Poly r(h.F);
    for (int i = 0; i <= h.degree(); i += static_cast<int>(p)) r.c.push_back(h.c[i]);
    h = r;
    pj *= p;
  }
  return {h, pj};
}

std::vector<FiniteField::Elt> field_elements(const FiniteField& R, std::size_t limit) {
  std::vector<FiniteField::Elt> out;
  const int n = R.degree();
  std::vector<std::uint64_t> c(n, 0);
  while (out.size() < limit) {
    out.push_back(R.from_coords(c));
    int i = 0;
    while (i < n && ++c[i] == R.p()) c[i++] = 0;
    if (i == n) break;
  }
  return out;
}

}  // namespace

std::string ClosedPoint::str() const { return at_infinity ? "infinity" : poly.str(); }

std::vector<Factor> factor_monic(const Poly& g) {
  auto out = factor_rec(g, 0);
  std::sort(out.begin(), out.end(), sort_before);
  return out;
}

std::vector<Factor> factor_squarefree(const Poly& f) {
  if (f.degree() <= 0) return {};
  if (f.degree() == 1) return {{f.monic(), 1, 1}};
  Poly g = f;
  std::vector<Factor> out;
  for (;;) {
    try {
      const Elem an = g.primitive().lead();
      for (auto& fac : factor_monic(monicize(g))) out.push_back({unmonicize(fac.poly, an), fac.e, fac.f});
      break;
    } catch (const PrecisionExhausted&) {
      // Exact input: separating close roots may need more digits than the field carries.
      if (!f.is_exact()) throw;
      out.clear();
      g = f.reembed(escalate_precision(g.F));
    }
  }
  for (auto& fac : out) fac.poly = fac.poly.reembed(f.F);
  std::sort(out.begin(), out.end(), sort_before);
  return out;
}

std::optional<Elem> recognize(const Elem& x) {
  const Base& F = x.field();
  const BaseField& B = *F;
  if (x.is_exact()) return x;
  if (x.is_inexact_zero()) return Elem::zero(F);
  if (x.shift() < 0) return std::nullopt;
  const long P = x.precision();
  auto coords = x.integral_coords(P);
  Elem out = Elem::zero(F);
  for (int i = 0; i < B.level; ++i) {
    std::vector<Coef> unit(B.level, B.zero());
    if (B.is_zero(coords[i])) continue;
    Coef num, den;
    if (B.kind == FieldKind::PAdic) {
      mpz_class m;
      mpz_ui_pow_ui(m.get_mpz_t(), B.p, static_cast<unsigned long>(P));
      mpz_class bound = sqrt(m / 2);
      mpz_class r0 = m, r1 = coords[i].z, s0 = 0, s1 = 1;
      while (r1 > bound) {
        mpz_class q = r0 / r1;
        mpz_class t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
      }
      if (s1 == 0 || abs(s1) > bound || mpz_divisible_ui_p(s1.get_mpz_t(), B.p)) return std::nullopt;
      num.z = r1;
      den.z = s1;
    } else {
      auto Fp = finite_field(B.p, 1);
      FPoly r0(P + 1, Fp->zero()), r1, s0, s1 = fpoly::constant(*Fp, Fp->one());
      r0[P] = Fp->one();
      for (auto v : coords[i].t) r1.push_back({v});
      fpoly::trim(*Fp, r1);
      while (fpoly::degree(r1) >= (P + 1) / 2) {
        auto [q, r] = fpoly::divrem(*Fp, r0, r1);
        r0 = r1;
        r1 = r;
        FPoly t = fpoly::sub(*Fp, s0, fpoly::mul(*Fp, q, s1));
        s0 = s1;
        s1 = t;
      }
      if (s1.empty() || fpoly::degree(s1) > P / 2 || Fp->is_zero(s1[0])) return std::nullopt;
      for (auto& v : r1) num.t.push_back(v[0]);
      for (auto& v : s1) den.t.push_back(v[0]);
    }
    unit[i] = num;
    out = out + Elem::from_coords(F, unit, den, 0);
  }
  return out;
}

void check_squarefree(const Poly& f) {
  if (!f.is_exact()) throw std::invalid_argument("squarefree check needs exact input");
  if (f.degree() <= 0) return;
  Poly d = f.derivative();
  if (d.is_zero()) {
    auto [h, pj] = inseparable_part(f);
    if (h.degree() != 1)
      throw UnsupportedInput("inseparable boundary factor is not of the form x^(p^k) - c: " + f.str());
    Elem c = -h.c[0] / h.c[1];
    if (c.is_exact_zero() || is_pth_power(c)) throw NotSquarefree("boundary polynomial is not squarefree: " + f.str());
    return;
  }
  Poly g = gcd_exact(f, d);
  if (g.degree() <= 0) return;
  // In characteristic p the gcd may consist of inseparable irreducible factors.
  if (f.F->kind == FieldKind::Laurent && g.derivative().is_zero()) {
    check_squarefree(g);
    Poly rest = f.divrem(g).first;
    if (gcd_exact(rest, g).degree() > 0) throw NotSquarefree("boundary polynomial is not squarefree: " + f.str());
    check_squarefree(rest);
    return;
  }
  throw NotSquarefree("boundary polynomial is not squarefree: " + f.str());
}

BoundarySet split_boundary(const Poly& f, bool include_infinity) {
  BoundarySet out;
  out.F = f.F;
  out.product = f;
  out.include_infinity = include_infinity;
  if (f.is_zero()) throw InputError("boundary polynomial is zero");
  // Inexact products come from parametrizations and are squarefree by construction.
  if (f.is_exact()) check_squarefree(f);
  std::vector<Factor> factors;
  Poly sep = f;
  if (f.degree() > 0 && f.F->kind == FieldKind::Laurent && f.is_exact()) {
    Poly d = f.derivative();
    Poly ins = d.is_zero() ? f.monic() : gcd_exact(f, d);
    if (ins.degree() > 0) {
      auto [h, pj] = inseparable_part(ins);
      factors.push_back({ins.monic(), static_cast<int>(pj), 1});
      sep = f.divrem(ins).first;
    }
  }
  for (auto& fac : factor_squarefree(sep)) factors.push_back(fac);
  std::sort(factors.begin(), factors.end(), sort_before);
  for (auto& fac : factors) {
    ClosedPoint P;
    P.poly = fac.poly;
    P.degree = fac.poly.degree();
    P.e = fac.e;
    P.f = fac.f;
    out.points.push_back(P);
  }
  if (include_infinity) {
    ClosedPoint P;
    P.at_infinity = true;
    out.points.push_back(P);
  }
  return out;
}

Ramification classify_ramification(const ClosedPoint& P) {
  if (P.at_infinity || P.degree == 1) return {1, 1, true};
  auto fac = factor_rec(monicize(P.poly), 0);
  if (fac.size() != 1) throw std::logic_error("closed point polynomial is reducible");
  return {fac[0].e, fac[0].f, fac[0].e == 1};
}

const char* curve_class_name(CurveClass c) {
  switch (c) {
    case CurveClass::NO_MODEL_P1: return "NO_MODEL_P1";
    case CurveClass::NO_MODEL_A1: return "NO_MODEL_A1";
    case CurveClass::GENUS0_OPEN: return "GENUS0_OPEN";
    case CurveClass::CONIC_ANISOTROPIC_OPEN: return "CONIC_ANISOTROPIC_OPEN";
    case CurveClass::ELLIPTIC: return "ELLIPTIC";
    case CurveClass::ELLIPTIC_OPEN: return "ELLIPTIC_OPEN";
  }
  return "?";
}

CurveClassification classify_curve(CurveKind kind, int boundary_points, bool single_rational_point,
                                   bool has_rational_point) {
  switch (kind) {
    case CurveKind::Elliptic:
      return {boundary_points == 0 ? CurveClass::ELLIPTIC : CurveClass::ELLIPTIC_OPEN, ""};
    case CurveKind::P1:
    case CurveKind::Conic: {
      const bool split = kind == CurveKind::P1 || has_rational_point;
      if (boundary_points == 0) {
        if (split)
          return {CurveClass::NO_MODEL_P1, "P^1_K does not have Neron lft-model: every K-endomorphism would extend to P^1_S"};
        return {CurveClass::NO_MODEL_P1,
                "the conic acquires a point over the maximal unramified extension, so it has no Neron lft-model"};
      }
      if (split && boundary_points == 1 && single_rational_point)
        return {CurveClass::NO_MODEL_A1, "A^1_K does not admit Neron lft-model over S"};
      return {split ? CurveClass::GENUS0_OPEN : CurveClass::CONIC_ANISOTROPIC_OPEN, ""};
    }
  }
  throw UnsupportedInput("unsupported curve");
}

// ---------------------------------------------------------------- conics

namespace {

long hilbert_q2(const Elem& a, const Elem& b) {
  // (a, b)_2 over Q_2 with a = 2^al u, b = 2^be v.
  auto split = [](const Elem& x) {
    long al = x.val();
    Elem u = x.mul_pi(-al);
    mpz_class m = u.integral_coords(3)[0].z;
    return std::pair<long, long>{al, static_cast<long>(mpz_fdiv_ui(m.get_mpz_t(), 8))};
  };
  auto [al, u] = split(a);
  auto [be, v] = split(b);
  auto eps = [](long w) { return ((w - 1) / 2) & 1; };
  auto omega = [](long w) { return ((w * w - 1) / 8) & 1; };
  long e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
  return (e & 1) ? -1 : 1;
}

bool from_base_level(const Elem& x) {
  const BaseField& B = *x.field();
  for (int i = 1; i < B.level; ++i)
    if (!B.is_zero(x.num()[i])) return false;
  return true;
}

struct Normalized {
  std::vector<Elem> coef;   // valuations in {0, 1}, at most one equal to 1
  std::vector<long> scale;  // original coordinate = pi^scale * new coordinate
};

Normalized normalize_conic(const std::vector<Elem>& abc) {
  Normalized N;
  N.scale.assign(3, 0);
  for (int i = 0; i < 3; ++i) {
    long v = abc[i].val();
    long h = v >= 0 ? v / 2 : -((-v + 1) / 2);
    N.coef.push_back(abc[i].mul_pi(-2 * h));
    N.scale[i] = -h;
  }
  int ones = 0;
  for (auto& c : N.coef) ones += c.val() == 1;
  if (ones == 3) {
    for (auto& c : N.coef) c = c.mul_pi(-1);
  } else if (ones == 2) {
    for (int i = 0; i < 3; ++i) {
      if (N.coef[i].val() == 1) {
        N.coef[i] = N.coef[i].mul_pi(-1);
        N.scale[i] -= 1;
      } else {
        N.coef[i] = N.coef[i].mul_pi(1);
      }
    }
  }
  return N;
}

Elem conic_value(const std::vector<Elem>& c, const std::vector<Elem>& P) {
  return c[0] * P[0] * P[0] + c[1] * P[1] * P[1] + c[2] * P[2] * P[2];
}

// Newton iteration for a root of A T^2 + B near t0, given v(f(t0)) > 2 v(f'(t0)).
Elem newton_square_root(const Elem& A, const Elem& Bc, Elem t, long prec) {
  const Elem two = Elem::from_long(A.field(), 2);
  const long vd = (two * A * t).val();
  const int iters = 12;
  const long work = prec + 2 * vd + (vd + 1) * iters;
  t = t.truncate(work);
  for (int i = 0; i < iters; ++i) {
    Elem fv = A * t * t + Bc;
    if (fv.is_exact_zero() || fv.val_bound() >= prec + 2 * vd) break;
    t = t - fv / (two * A * t);
  }
  return t.truncate(prec);
}

}  // namespace

bool conic_has_rational_point(const Elem& a, const Elem& b, const Elem& c) {
  const BaseField& B = *a.field();
  if (a.is_exact_zero() || b.is_exact_zero() || c.is_exact_zero())
    throw UnsupportedInput("degenerate conic: coefficients must be nonzero");
  if (B.p == 2) {
    if (B.kind == FieldKind::Laurent) throw Char2Unsupported("conics over Laurent fields of characteristic 2");
    if (B.level == 1) return hilbert_q2(-a * c, -b * c) == 1;
    if (!(from_base_level(a) && from_base_level(b) && from_base_level(c)))
      throw UnsupportedInput("2-adic conic with coefficients outside Q_2");
    if (B.level % 2 == 0) return true;
    auto F1 = make_padic(2, B.precision, B.tower_cap);
    auto down = [&](const Elem& x) { return Elem::from_coords(F1, {x.num()[0]}, x.den(), x.shift()); };
    return hilbert_q2(-down(a) * down(c), -down(b) * down(c)) == 1;
  }
  Normalized N = normalize_conic({a, b, c});
  int k = -1;
  for (int i = 0; i < 3; ++i)
    if (N.coef[i].val() == 1) k = i;
  if (k < 0) return true;
  const int i = (k + 1) % 3, j = (k + 2) % 3;
  return B.residue->is_square(B.residue->neg((N.coef[i] / N.coef[j]).residue()));
}

std::optional<std::vector<Elem>> conic_point(const Elem& a, const Elem& b, const Elem& c) {
  const Base& F = a.field();
  const BaseField& B = *F;
  const FiniteField& R = *B.residue;
  if (!conic_has_rational_point(a, b, c)) return std::nullopt;
  const long prec = B.precision;
  Normalized N = normalize_conic({a, b, c});
  std::vector<Elem> P(3, Elem::zero(F));
  if (B.p != 2) {
    int k = -1;
    for (int i = 0; i < 3; ++i)
      if (N.coef[i].val() == 1) k = i;
    if (k >= 0) {
      const int i = (k + 1) % 3, j = (k + 2) % 3;
      // coef_i X_i^2 + coef_j X_j^2 = 0 with X_i = 1.
      auto roots = fpoly::roots(R, FPoly{(N.coef[i] / N.coef[j]).residue(), R.zero(), R.one()});
      Poly sq(F, {N.coef[i], Elem::zero(F), N.coef[j]});
      P[i] = Elem::one(F);
      P[j] = hensel_root(sq, roots.front().first, prec);
    } else {
      const Elem &A = N.coef[0], &Bc = N.coef[1], &C = N.coef[2];
      bool found = false;
      for (const auto& xb : field_elements(R, 1u << 20)) {
        auto rhs = R.mul(R.neg(R.add(C.residue(), R.mul(A.residue(), R.mul(xb, xb)))), R.inv(Bc.residue()));
        FiniteField::Elt yb;
        if (R.is_zero(rhs)) {
          yb = R.zero();
        } else if (R.is_square(rhs)) {
          yb = fpoly::roots(R, FPoly{R.neg(rhs), R.zero(), R.one()}).front().first;
        } else {
          continue;
        }
        P[0] = Elem::lift(F, xb);
        P[1] = Elem::lift(F, yb);
        Poly zq(F, {A * P[0] * P[0] + Bc * P[1] * P[1], Elem::zero(F), C});
        auto zr = fpoly::roots(R, reduce(zq));
        P[2] = hensel_root(zq, zr.front().first, prec);
        found = true;
        break;
      }
      if (!found) throw std::logic_error("no residue point on a smooth conic");
    }
  } else {
    // 2-adic: search residues mod 8 with one coordinate equal to 1, then lift.
    std::vector<Elem> reps;
    const int D = B.level;
    std::vector<std::uint64_t> dig(D, 0);
    for (;;) {
      std::vector<Coef> coords;
      for (int i = 0; i < D; ++i) coords.push_back(B.from_long(static_cast<long>(dig[i])));
      reps.push_back(Elem::from_coords(F, coords, B.one(), 0));
      int i = 0;
      while (i < D && ++dig[i] == 8) dig[i++] = 0;
      if (i == D) break;
    }
    bool found = false;
    for (int one = 0; one < 3 && !found; ++one) {
      const int i = (one + 1) % 3, j = (one + 2) % 3;
      for (const auto& u : reps) {
        for (const auto& v : reps) {
          std::vector<Elem> Q(3);
          Q[one] = Elem::one(F);
          Q[i] = u;
          Q[j] = v;
          Elem val = conic_value(N.coef, Q);
          // Lift along the coordinate with the smallest partial derivative.
          int best = -1;
          long bd = kInfinity;
          for (int l = 0; l < 3; ++l) {
            Elem d = Elem::from_long(F, 2) * N.coef[l] * Q[l];
            if (d.is_exact_zero()) continue;
            if (d.val() < bd) {
              bd = d.val();
              best = l;
            }
          }
          if (best < 0 || val.val_bound() <= 2 * bd) continue;
          Elem rest = Elem::zero(F);
          for (int l = 0; l < 3; ++l)
            if (l != best) rest = rest + N.coef[l] * Q[l] * Q[l];
          Q[best] = newton_square_root(N.coef[best], rest, Q[best], prec);
          P = Q;
          found = true;
          break;
        }
        if (found) break;
      }
    }
    if (!found) throw std::logic_error("2-adic conic point search failed");
  }
  for (int i = 0; i < 3; ++i) P[i] = P[i].mul_pi(N.scale[i]);
  return P;
}

}  // namespace neron
