// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#include "neron/elliptic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace neron {

namespace {

using Elt = FiniteField::Elt;

const int kWeight[5] = {1, 2, 3, 4, 6};

long vof(const Elem& e) { return e.is_exact_zero() ? kInfinity : e.val(); }

Elt res(const Elem& e) {
  if (e.is_exact_zero()) return e.field()->residue->zero();
  return e.residue();
}

bool has_root(const FiniteField& R, FPoly f) {
  fpoly::trim(R, f);
  if (f.empty()) return true;
  if (fpoly::degree(f) == 0) return false;
  return !fpoly::roots(R, fpoly::monic(R, f)).empty();
}

Poly squarefree_part(const Poly& f) {
  if (!f.is_exact()) return f;
  Poly d = f.derivative();
  if (d.is_zero()) return f;
  Poly g = gcd_exact(f, d);
  if (g.degree() <= 0) return f;
  return f.divrem(g).first.monic();
}

bool is_squarefree(const Poly& f) {
  Poly d = f.derivative();
  if (d.is_zero()) return false;
  return gcd_exact(f, d).degree() <= 0;
}

// K[x, y] / (g(x), y^2 + B(x) y - C(x)) with basis x^i y^j.
struct FiberAlgebra {
  Poly g, B, C;
  int d = 0;
  Base F;

  FiberAlgebra(const WeierstrassCurve& W, const Poly& gm) : g(gm), d(gm.degree()), F(gm.F) {
    const auto& a = W.a;
    B = Poly(F, {a[2], a[0]});
    C = Poly(F, {a[4], a[3], a[1], Elem::one(F)});
    B.trim();
    C.trim();
  }

  Poly red(const Poly& p) const { return p.degree() < d ? p : p.divrem(g).second; }

  Matrix matrix(bool by_y) const {
    const int n = 2 * d;
    Matrix M(n, std::vector<Elem>(n, Elem::zero(F)));
    for (int k = 0; k < n; ++k) {
      Poly p0(F), p1(F);
      std::vector<Elem> mc(k % d + 1, Elem::zero(F));
      mc.back() = Elem::one(F);
      Poly mono(F, std::move(mc));
      (k < d ? p0 : p1) = mono;
      Poly q0, q1;
      if (by_y) {
        q0 = red(p1 * C);
        q1 = red(p0 - p1 * B);
      } else {
        q0 = red(p0 * Poly::x(F));
        q1 = red(p1 * Poly::x(F));
      }
      for (int i = 0; i < d; ++i) {
        M[i][k] = q0.coeff(i);
        M[d + i][k] = q1.coeff(i);
      }
    }
    return M;
  }

  // y^2 + B y - C has a repeated root over every root of g.
  bool ramified_in_y() const {
    Poly D = red(B * B + C.scale(Elem::from_long(F, 4)));
    for (const auto& c : D.c)
      if (!c.is_exact_zero()) return false;
    return true;
  }
};

Matrix add_scaled(const Matrix& A, const Matrix& B, const Elem& l) {
  Matrix M = A;
  for (size_t i = 0; i < M.size(); ++i)
    for (size_t j = 0; j < M.size(); ++j) M[i][j] = M[i][j] + B[i][j] * l;
  return M;
}

Matrix quotient(const Matrix& Num, const Matrix& Den, const Base& F) {
  const size_t n = Num.size();
  Matrix Q(n, std::vector<Elem>(n));
  for (size_t k = 0; k < n; ++k) {
    std::vector<Elem> col(n);
    for (size_t i = 0; i < n; ++i) col[i] = Num[i][k];
    auto sol = solve(Den, col, F);
    for (size_t i = 0; i < n; ++i) Q[i][k] = sol[i];
  }
  return Q;
}

Poly to_model(const Poly& g, const Isomorphism& I) { return g.shift_scale(I.r, I.u * I.u).monic(); }

std::pair<Elem, Elem> point_to_model(const Elem& x, const Elem& y, const Isomorphism& I) {
  const Elem u2 = I.u * I.u;
  const Elem xr = x - I.r;
  return {xr / u2, (y - I.t - I.s * xr) / (u2 * I.u)};
}

// Root valuation of an irreducible polynomial; kInfinity for x itself.
Rational root_valuation(const Poly& g) {
  NewtonPolygon np = newton_polygon(g);
  if (np.zero_roots > 0) return Rational(kInfinity);
  return -np.segments[0].slope;
}

std::string label_between(const Rational& v) {
  return "between " + std::to_string(v.floor()) + " and " + std::to_string(v.ceil());
}

}  // namespace

WeierstrassCurve WeierstrassCurve::from_longs(const Base& F, const std::array<long, 5>& c) {
  WeierstrassCurve E;
  E.F = F;
  for (int i = 0; i < 5; ++i) E.a[i] = Elem::from_long(F, c[i]);
  return E;
}

Elem WeierstrassCurve::equation(const Elem& x, const Elem& y) const {
  return y * y + a[0] * x * y + a[2] * y - (x * x * x + a[1] * x * x + a[3] * x + a[4]);
}

std::string WeierstrassCurve::str() const {
  std::string s = "[";
  for (int i = 0; i < 5; ++i) s += (i ? ", " : "") + a[i].str();
  return s + "]";
}

WeierstrassQuantities quantities(const WeierstrassCurve& E) {
  const Base& F = E.F;
  auto n = [&](long v) { return Elem::from_long(F, v); };
  const auto& [a1, a2, a3, a4, a6] = E.a;
  WeierstrassQuantities Q;
  Q.b2 = a1 * a1 + n(4) * a2;
  Q.b4 = n(2) * a4 + a1 * a3;
  Q.b6 = a3 * a3 + n(4) * a6;
  Q.b8 = a1 * a1 * a6 + n(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  Q.c4 = Q.b2 * Q.b2 - n(24) * Q.b4;
  Q.c6 = -(Q.b2 * Q.b2 * Q.b2) + n(36) * Q.b2 * Q.b4 - n(216) * Q.b6;
  Q.disc = -(Q.b2 * Q.b2 * Q.b8) - n(8) * Q.b4 * Q.b4 * Q.b4 - n(27) * Q.b6 * Q.b6 + n(9) * Q.b2 * Q.b4 * Q.b6;
  return Q;
}

Isomorphism Isomorphism::identity(const Base& F) {
  return {Elem::one(F), Elem::zero(F), Elem::zero(F), Elem::zero(F)};
}

WeierstrassCurve transform(const WeierstrassCurve& E, const Isomorphism& T) {
  const Base& F = E.F;
  auto n = [&](long v) { return Elem::from_long(F, v); };
  const auto& [a1, a2, a3, a4, a6] = E.a;
  const Elem &u = T.u, &r = T.r, &s = T.s, &t = T.t;
  const Elem ui = u.inverse();
  const Elem ui2 = ui * ui, ui3 = ui2 * ui, ui4 = ui2 * ui2, ui6 = ui3 * ui3;
  WeierstrassCurve W;
  W.F = F;
  W.a[0] = (a1 + n(2) * s) * ui;
  W.a[1] = (a2 - s * a1 + n(3) * r - s * s) * ui2;
  W.a[2] = (a3 + r * a1 + n(2) * t) * ui3;
  W.a[3] = (a4 - s * a3 + n(2) * r * a2 - (t + r * s) * a1 + n(3) * r * r - n(2) * s * t) * ui4;
  W.a[4] = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) * ui6;
  return W;
}

Isomorphism compose(const Isomorphism& A, const Isomorphism& B) {
  const Elem u12 = A.u * A.u;
  return {A.u * B.u, A.r + u12 * B.r, A.s + A.u * B.s, A.t + u12 * A.s * B.r + u12 * A.u * B.t};
}

std::string KodairaData::symbol() const {
  switch (type) {
    case KodairaType::I0: return "I0";
    case KodairaType::In: return "I" + std::to_string(n);
    case KodairaType::II: return "II";
    case KodairaType::III: return "III";
    case KodairaType::IV: return "IV";
    case KodairaType::I0s: return "I0*";
    case KodairaType::Ins: return "I" + std::to_string(n) + "*";
    case KodairaType::IVs: return "IV*";
    case KodairaType::IIIs: return "III*";
    case KodairaType::IIs: return "II*";
  }
  return "?";
}

TateResult tate_full(const WeierstrassCurve& E0) {
  const Base F = E0.F;
  const FiniteField& R = *F->residue;
  const std::uint64_t p = F->p;
  for (const auto& c : E0.a)
    if (!c.is_exact()) throw InputError("Weierstrass coefficients must be exact");
  const Elem zero = Elem::zero(F), one = Elem::one(F);
  const Elem pi = Elem::pi_power(F, 1);
  auto lift = [&](const Elt& r) { return Elem::lift(F, r); };
  auto piv = [&](long k) { return Elem::pi_power(F, k); };
  const Elem half = p == 2 ? zero : Elem::from_long(F, 2).inverse();
  const Elem four = Elem::from_long(F, 4);
  auto sqrt_res = [&](const Elem& e) { return R.pth_root(res(e)); };

  WeierstrassCurve W = E0;
  Isomorphism iso = Isomorphism::identity(F);
  auto apply = [&](const Isomorphism& T) {
    W = transform(W, T);
    iso = compose(iso, T);
  };
  long k = 0;
  for (int i = 0; i < 5; ++i) {
    const long v = vof(E0.a[i]);
    if (v < 0) k = std::max(k, (-v + kWeight[i] - 1) / kWeight[i]);
  }
  if (k > 0) apply({piv(-k), zero, zero, zero});

  auto finish = [&](KodairaType type, int n, int m, int c, long vD) {
    TateResult T;
    T.kodaira.type = type;
    T.kodaira.n = n;
    T.kodaira.m = m;
    T.kodaira.c = c;
    T.kodaira.vdisc = vD;
    for (int i = 0; i < m; ++i) T.kodaira.labels.push_back(std::to_string(i));
    W.minimal = true;
    T.model = W;
    T.iso = iso;
    return T;
  };

  for (int guard = 0; guard < 256; ++guard) {
    auto Q = quantities(W);
    if (Q.disc.is_exact_zero()) throw InputError("singular Weierstrass equation");
    const long vD = Q.disc.val();
    if (vD == 0) return finish(KodairaType::I0, 0, 1, 1, 0);

    // Move the singular point of the reduction to (0, 0).
    {
      const auto& a = W.a;
      Elt r, t;
      if (p == 2) {
        if (vof(Q.b2) > 0) {
          r = sqrt_res(a[3]);
          const Elem rl = lift(r);
          t = sqrt_res(((rl + a[1]) * rl + a[3]) * rl + a[4]);
        } else {
          const Elt inv = R.inv(res(a[0]));
          r = R.mul(inv, res(a[2]));
          t = R.mul(inv, R.add(res(a[3]), R.mul(r, r)));
        }
      } else {
        if (p == 3) {
          r = vof(Q.b2) > 0 ? R.pth_root(res(-Q.b6)) : R.mul(R.neg(res(Q.b4)), R.inv(res(Q.b2)));
        } else {
          const Elem twelve = Elem::from_long(F, 12);
          r = vof(Q.c4) > 0 ? res(-Q.b2 / twelve) : res(-(Q.c6 + Q.b2 * Q.c4) / (twelve * Q.c4));
        }
        t = res((-(a[0] * lift(r)) - a[2]) * half);
      }
      apply({one, lift(r), zero, lift(t)});
    }
    auto& a = W.a;
    if (vof(a[2]) < 1 || vof(a[3]) < 1 || vof(a[4]) < 1)
      throw std::logic_error("singular point was not moved to the origin");
    Q = quantities(W);

    if (vof(Q.b2) == 0) {
      const bool split = has_root(R, {R.neg(res(a[1])), res(a[0]), R.one()});
      TateResult T = finish(KodairaType::In, static_cast<int>(vD), static_cast<int>(vD),
                            split ? static_cast<int>(vD) : (vD % 2 == 0 ? 2 : 1), vD);
      T.kodaira.split = split;
      return T;
    }
    if (vof(a[4]) < 2) return finish(KodairaType::II, 0, 1, 1, vD);
    if (vof(Q.b8) < 3) return finish(KodairaType::III, 0, 2, 2, vD);
    if (vof(Q.b6) < 3) {
      const Elem a3t = a[2].mul_pi(-1), a6t = a[4].mul_pi(-2);
      const bool r = has_root(R, {R.neg(res(a6t)), res(a3t), R.one()});
      return finish(KodairaType::IV, 0, 3, r ? 3 : 1, vD);
    }

    if (p == 2)
      apply({one, zero, lift(sqrt_res(a[1])), pi * lift(sqrt_res(a[4].mul_pi(-2)))});
    else
      apply({one, zero, -a[0] * half, -a[2] * half});
    if (vof(a[0]) < 1 || vof(a[1]) < 1 || vof(a[2]) < 2 || vof(a[3]) < 2 || vof(a[4]) < 3)
      throw std::logic_error("Tate normalization failed");

    FPoly P = {res(a[4].mul_pi(-3)), res(a[3].mul_pi(-2)), res(a[1].mul_pi(-1)), R.one()};
    auto fac = fpoly::factor(R, P);
    int maxmult = 0, linear = 0;
    for (auto& [f, e] : fac) {
      maxmult = std::max(maxmult, e);
      if (fpoly::degree(f) == 1) linear += e;
    }
    if (maxmult == 1) return finish(KodairaType::I0s, 0, 5, 1 + linear, vD);

    if (maxmult == 2) {
      Elt rho;
      for (auto& [f, e] : fac)
        if (e == 2) rho = R.neg(f[0]);
      apply({one, pi * lift(rho), zero, zero});
      long ix = 3, iy = 3;
      int c = 0;
      auto tilde = [&]() {
        return std::array<Elem, 4>{a[1].mul_pi(-1), a[2].mul_pi(-(iy - 1)), a[3].mul_pi(-ix),
                                   a[4].mul_pi(-(ix - 1) - (iy - 1))};
      };
      for (;;) {
        auto tl = tilde();
        if (vof(tl[1] * tl[1] + four * tl[3]) == 0) {
          c = has_root(R, {R.neg(res(tl[3])), res(tl[1]), R.one()}) ? 4 : 2;
          break;
        }
        const Elt tt = p == 2 ? sqrt_res(tl[3]) : res(-tl[1] * half);
        apply({one, zero, zero, piv(iy - 1) * lift(tt)});
        ++iy;
        tl = tilde();
        if (vof(tl[2] * tl[2] - four * tl[3] * tl[0]) == 0) {
          c = has_root(R, {res(tl[3]), res(tl[2]), res(tl[0])}) ? 4 : 2;
          break;
        }
        const Elt rr = p == 2 ? sqrt_res(tl[3] / tl[0]) : res(-tl[2] / (Elem::from_long(F, 2) * tl[0]));
        apply({one, piv(ix - 1) * lift(rr), zero, zero});
        ++ix;
      }
      const int n = static_cast<int>(ix + iy - 5);
      return finish(KodairaType::Ins, n, 5 + n, c, vD);
    }

    const Elt rho = R.neg(fac[0].first[0]);
    apply({one, pi * lift(rho), zero, zero});
    {
      const Elem a3t = a[2].mul_pi(-2), a6t = a[4].mul_pi(-4);
      if (vof(a3t * a3t + four * a6t) == 0) {
        const bool r = has_root(R, {R.neg(res(a6t)), res(a3t), R.one()});
        return finish(KodairaType::IVs, 0, 7, r ? 3 : 1, vD);
      }
      const Elt tt = p == 2 ? sqrt_res(a6t) : res(-a3t * half);
      apply({one, zero, zero, piv(2) * lift(tt)});
    }
    if (vof(a[3]) < 4) return finish(KodairaType::IIIs, 0, 8, 2, vD);
    if (vof(a[4]) < 6) return finish(KodairaType::IIs, 0, 9, 1, vD);
    apply({pi, zero, zero, zero});
  }
  throw std::logic_error("Tate's algorithm did not terminate");
}

WeierstrassCurve minimal_model(const WeierstrassCurve& E) { return tate_full(E).model; }

KodairaData tate(const WeierstrassCurve& E) { return tate_full(E).kodaira; }

std::string CurvePoint::str() const {
  switch (kind) {
    case Kind::Origin: return "O";
    case Kind::Rational: return "(" + x.str() + ", " + y.str() + ")";
    case Kind::XFiber: return xfiber.str();
  }
  return "?";
}

std::vector<EllipticClosedPoint> closed_points(const WeierstrassCurve& E, const std::vector<CurvePoint>& delta) {
  std::vector<EllipticClosedPoint> out;
  const Base& F = E.F;
  for (size_t idx = 0; idx < delta.size(); ++idx) {
    const CurvePoint& P = delta[idx];
    EllipticClosedPoint Q;
    Q.source = static_cast<int>(idx);
    if (P.kind == CurvePoint::Kind::Origin) {
      Q.label = "O";
      out.push_back(Q);
      continue;
    }
    if (P.kind == CurvePoint::Kind::Rational) {
      if (!E.equation(P.x, P.y).is_exact_zero()) throw InputError("point " + P.str() + " is not on the curve");
      Q.xpoly = Poly(F, {-P.x, Elem::one(F)});
      Q.generator = Poly(F, {-P.y, Elem::one(F)});
      Q.label = P.str();
      out.push_back(Q);
      continue;
    }
    if (P.xfiber.degree() > 2) throw UnsupportedBoundary("x-fiber points are limited to degree 2: " + P.xfiber.str());
    if (P.xfiber.degree() < 1) throw InputError("x-fiber polynomial must have positive degree");
    BoundarySet S = split_boundary(P.xfiber, false);
    for (const ClosedPoint& cp : S.points) {
      FiberAlgebra A(E, cp.poly);
      if (A.ramified_in_y()) {
        if (F->p == 2) throw UnsupportedBoundary("x-fiber through a 2-torsion point in characteristic 2");
        EllipticClosedPoint R = Q;
        R.xpoly = cp.poly;
        R.generator = cp.poly;
        R.degree = cp.degree;
        R.e = cp.e;
        R.f = cp.f;
        R.label = cp.poly.str();
        out.push_back(R);
        continue;
      }
      const Matrix My = A.matrix(true), Mx = A.matrix(false);
      bool done = false;
      for (int i = 0; i < 6 && !done; ++i)
        for (int j = 0; j < 6 && !done; ++j) {
          const Elem lambda = Elem::from_long(F, i) + Elem::pi_power(F, 1) * Elem::from_long(F, j);
          Poly chi = charpoly(add_scaled(My, Mx, lambda), F);
          if (!is_squarefree(chi)) continue;
          auto facs = factor_squarefree(chi);
          for (size_t k = 0; k < facs.size(); ++k) {
            const Factor& fac = facs[k];
            EllipticClosedPoint R = Q;
            R.label = cp.poly.str() + (facs.size() > 1 ? " branch " + std::to_string(k) : "");
            R.xpoly = cp.poly;
            R.generator = fac.poly;
            R.degree = fac.poly.degree();
            R.e = fac.e;
            R.f = fac.f;
            out.push_back(R);
          }
          done = true;
        }
      if (!done) throw std::logic_error("could not separate the points of an x-fiber");
    }
  }
  return out;
}

namespace {

struct ClosedSpec {
  PointSpecialization spec;
  Rational v;  // valuation of x in model coordinates
  bool origin = false;
};

ClosedSpec specialize_closed(const TateResult& T, const EllipticClosedPoint& Q, const CurvePoint* rational) {
  ClosedSpec out;
  const KodairaData& K = T.kodaira;
  const bool bad = K.type != KodairaType::I0;
  if (Q.xpoly.is_zero()) {
    out.origin = true;
    out.spec = {"0", "O", true, true};
    return out;
  }
  const Poly g = to_model(Q.xpoly, T.iso);
  out.v = root_valuation(g);
  if (out.v < Rational(0)) {
    out.origin = true;
    out.spec = {"0", "O", true, true};
    return out;
  }
  const FiniteField& R = *T.model.F->residue;
  if (!bad || out.v == Rational(0)) {
    out.spec.component = "0";
    if (rational) {
      auto [x, y] = point_to_model(rational->x, rational->y, T.iso);
      out.spec.residue = "(" + R.to_string(res(x)) + ", " + R.to_string(res(y)) + ")";
    } else {
      out.spec.residue = "x in roots of " + fpoly::to_string(R, reduce(g), "x");
    }
    return out;
  }
  out.spec.residue = "(0, 0)";
  out.spec.weierstrass_smooth = false;
  if (K.type == KodairaType::In) {
    const Rational half(K.n, 2);
    const Rational i = out.v < half ? out.v : half;
    out.spec.neron_smooth = i.is_integer() || Q.e == 1;
    if (!i.is_integer()) {
      out.spec.component = label_between(i);
      return out;
    }
    long label = i.num;
    if (rational && K.split && 2 * label < K.n) {
      // Orient the chain by the tangent the point approaches along.
      auto [x, y] = point_to_model(rational->x, rational->y, T.iso);
      const auto& a = T.model.a;
      Poly tang(T.model.F, {-a[1], a[0], Elem::one(T.model.F)});
      auto roots = fpoly::roots(R, reduce(tang));
      if (roots.size() == 2) {
        const Elem alpha = hensel_root(tang, roots[0].first, T.model.F->precision);
        const Elem beta = hensel_root(tang, roots[1].first, T.model.F->precision);
        const Elem da = y - alpha * x, db = y - beta * x;
        if (da.val_bound() < db.val_bound()) label = K.n - label;
      }
    }
    out.spec.component = std::to_string(label);
    return out;
  }
  out.spec.neron_smooth = Q.e == 1;
  out.spec.component = Q.e == 1 ? "non-identity" : "unresolved";
  return out;
}

}  // namespace

PointSpecialization specialize_point(const TateResult& T, const CurvePoint& P) {
  // The curve in input coordinates: undo the model isomorphism.
  const Isomorphism& I = T.iso;
  const Elem ui = I.u.inverse();
  Isomorphism back{ui, -I.r * ui * ui, -I.s * ui, (I.r * I.s - I.t) * ui * ui * ui};
  const WeierstrassCurve E = transform(T.model, back);
  auto pts = closed_points(E, {P});
  if (pts.empty()) throw InputError("empty boundary point");
  int best = 0;
  for (size_t i = 1; i < pts.size(); ++i)
    if (pts[i].e < pts[best].e) best = static_cast<int>(i);
  return specialize_closed(T, pts[best], P.kind == CurvePoint::Kind::Rational ? &P : nullptr).spec;
}

EllipticReport open_subset_verdicts(const WeierstrassCurve& E, const std::vector<CurvePoint>& delta,
                                    const RunOptions& opt) {
  EllipticReport out;
  TateResult T = tate_full(E);
  out.kodaira = T.kodaira;
  out.minimal = T.model;
  const WeierstrassCurve& W = T.model;
  const Base F = W.F;
  auto pts = closed_points(E, delta);

  NeronReport& R = out.report;
  R.curve_class = curve_class_name(delta.empty() ? CurveClass::ELLIPTIC : CurveClass::ELLIPTIC_OPEN);
  R.field = F->name();
  R.tower = 1;

  std::vector<ClosedSpec> specs;
  for (const auto& Q : pts) {
    const CurvePoint& src = delta[Q.source];
    specs.push_back(specialize_closed(T, Q, src.kind == CurvePoint::Kind::Rational ? &src : nullptr));
  }

  std::map<std::string, std::set<std::string>> smooth_at;
  bool any_cert = false, any_smooth = false;
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& Q = pts[i];
    const auto& S = specs[i].spec;
    BoundaryInfo b;
    b.poly = Q.str();
    b.e = Q.e;
    b.f = Q.f;
    b.status = status_name(Q.e == 1 ? Status::RATIONAL_CERT : S.neron_smooth ? Status::ACTIVE : Status::PARKED);
    b.location = "component " + S.component + " at " + S.residue;
    R.boundary.push_back(b);
    if (S.neron_smooth) {
      any_smooth = true;
      smooth_at[S.component].insert(S.residue);
    }
    if (Q.e == 1 && !any_cert) {
      any_cert = true;
      R.certificate = Q.xpoly.is_zero() ? "rational point O lies in Delta"
                                        : "point " + Q.str() + " (e=1, f=" + std::to_string(Q.f) + ") lies in Delta(K^sh)";
    }
  }
  R.verdict = any_cert ? Verdict::LFT_NOT_FINITE_TYPE : Verdict::FINITE_TYPE;
  if (!any_cert)
    R.certificate = delta.empty() ? "E is proper; its Neron model is the smooth locus of the minimal regular model"
                                  : "every point of Delta is ramified";
  R.equals_X_minus_Delta = !any_smooth;
  for (int i = 0; i < T.kodaira.m; ++i) {
    ComponentInfo c;
    c.id = i;
    c.depth = 0;
    c.tower = 1;
    c.provenance = T.kodaira.symbol() + ":" + T.kodaira.labels[i];
    auto it = smooth_at.find(T.kodaira.labels[i]);
    c.punctures = it == smooth_at.end() ? 0 : static_cast<int>(it->second.size());
    c.center = "Kodaira component " + T.kodaira.labels[i];
    R.components.push_back(c);
  }
  R.notes.push_back("Kodaira type " + T.kodaira.symbol() + ", m=" + std::to_string(T.kodaira.m) +
                    ", c=" + std::to_string(T.kodaira.c) + ", v(disc)=" + std::to_string(T.kodaira.vdisc));

  // Local disc towers at smooth Weierstrass specializations. Residue points
  // are made rational over an unramified extension first.
  int level = 1;
  std::vector<Poly> gm(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].xpoly.is_zero() || specs[i].origin || !specs[i].spec.weierstrass_smooth) continue;
    gm[i] = to_model(pts[i].xpoly, T.iso);
    if (specs[i].v == Rational(0))
      for (auto& [f, e] : fpoly::factor(*F->residue, residual_polynomial(gm[i], Rational(0))))
        level = std::lcm(level, fpoly::degree(f));
  }
  const Base G = level > 1 ? extend_unramified(F, level) : F;
  const FiniteField& RG = *G->residue;
  WeierstrassCurve WG;
  WG.F = G;
  for (int i = 0; i < 5; ++i) WG.a[i] = W.a[i].reembed(G);

  std::map<std::string, std::pair<std::string, std::vector<Poly>>> groups;
  auto add = [&](const std::string& key, const std::string& chart, const Poly& f) {
    auto& slot = groups[key];
    slot.first = chart;
    for (const auto& q : slot.second)
      if (q.str() == f.str()) return;
    slot.second.push_back(f);
  };
  auto inside = [&](const Poly& f) {
    NewtonPolygon np = newton_polygon(f);
    return np.zero_roots > 0 || np.segments[0].slope < Rational(0);
  };
  auto keep_inside = [&](const std::string& key, const std::string& chart, const Poly& f) {
    for (const Factor& fac : factor_squarefree(f))
      if (inside(fac.poly)) add(key, chart, fac.poly);
  };
  const Poly z = Poly::x(G);
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& Q = pts[i];
    if (!specs[i].spec.weierstrass_smooth) continue;
    const CurvePoint& src = delta[Q.source];
    if (specs[i].origin) {
      if (Q.xpoly.is_zero()) {
        add("O", "x/y", z);
      } else if (src.kind == CurvePoint::Kind::Rational) {
        auto [x, y] = point_to_model(src.x, src.y, T.iso);
        add("O", "x/y", z - Poly::constant((x / y).reembed(G)));
      } else {
        FiberAlgebra A(WG, gm[i].is_zero() ? to_model(Q.xpoly, T.iso).reembed(G) : gm[i].reembed(G));
        keep_inside("O", "x/y", squarefree_part(charpoly(quotient(A.matrix(false), A.matrix(true), G), G)));
      }
      continue;
    }
    const Poly g = gm[i].reembed(G);
    const auto& a = WG.a;
    for (auto& [xr, mult] : fpoly::roots(RG, reduce(g))) {
      const Elem xc = Elem::lift(G, xr);
      const Elt B = res(a[0] * xc + a[2]);
      const Elt C = res(((xc + a[1]) * xc + a[3]) * xc + a[4]);
      auto yroots = fpoly::roots(RG, FPoly{RG.neg(C), B, RG.one()});
      const bool vertical = yroots.size() == 1 && yroots[0].second == 2;
      const std::string xs = "x=" + RG.to_string(xr);
      if (src.kind == CurvePoint::Kind::Rational) {
        auto [x, y] = point_to_model(src.x, src.y, T.iso);
        const Elem xg = x.reembed(G), yg = y.reembed(G);
        const std::string key = xs + ",y=" + RG.to_string(res(yg));
        if (!vertical)
          add(key, "x", z - Poly::constant(xg - xc));
        else
          add(key, "y", z - Poly::constant(yg - Elem::lift(G, yroots[0].first)));
        continue;
      }
      if (!vertical) {
        keep_inside(xs, "x", g.shift_scale(xc, Elem::one(G)));
      } else {
        const Elt y0 = yroots[0].first;
        FiberAlgebra A(WG, g);
        Poly ypoly = squarefree_part(charpoly(A.matrix(true), G));
        keep_inside(xs + ",y=" + RG.to_string(y0), "y", ypoly.shift_scale(Elem::lift(G, y0), Elem::one(G)));
      }
    }
  }
  for (auto& [key, slot] : groups) {
    Poly prod = Poly::constant(Elem::one(G));
    for (const auto& f : slot.second) prod = prod * f;
    LocalTower tw;
    tw.location = key;
    tw.chart = slot.first;
    tw.report = run(split_boundary(prod, false), opt);
    R.truncated = R.truncated || tw.report.truncated;
    R.stages = std::max(R.stages, tw.report.stages);
    const bool tower_cert = tw.report.verdict != Verdict::FINITE_TYPE;
    if (tower_cert && !any_cert) R.notes.push_back("local tower at " + key + " did not terminate");
    out.towers.push_back(std::move(tw));
  }
  if (level > 1) R.notes.push_back("local towers computed over " + G->name());
  return out;
}

}  // namespace neron
