// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "neron/boundary.hpp"

using namespace neron;

namespace {

Poly P(const Base& F, std::vector<long> c) { return Poly::from_longs(F, c); }

// Legendre-style Hilbert symbol over a p-adic or Laurent field with odd p,
// computed from valuations and residue squareness only.
int hilbert_odd(const Elem& a, const Elem& b) {
  const auto& R = *a.field()->residue;
  long al = a.val(), be = b.val();
  auto u = a.mul_pi(-al).residue(), v = b.mul_pi(-be).residue();
  int s = 1;
  const mpz_class q = R.order();
  if ((al * be) % 2 != 0 && mpz_class((q - 1) / 2) % 2 != 0) s = -s;
  if (be % 2 != 0 && !R.is_square(u)) s = -s;
  if (al % 2 != 0 && !R.is_square(v)) s = -s;
  return s;
}

void check_product(const BoundarySet& B, const Poly& f) {
  Poly prod = Poly::constant(Elem::one(f.F));
  for (auto& pt : B.points)
    if (!pt.at_infinity) prod = prod * pt.poly;
  Poly diff = prod - f.monic();
  for (auto& c : diff.c) CHECK(c.val_bound() >= 10);
}

}  // namespace

TEST_CASE("split examples") {
  auto F5 = make_padic(5);
  auto B = split_boundary(P(F5, {0, -5, 1}), false);
  REQUIRE(B.points.size() == 2);
  CHECK(B.points[0].poly.str() == "x");
  CHECK(B.points[1].poly.str() == "x - 5");
  CHECK(B.points[1].poly.is_exact());

  auto B2 = split_boundary(P(F5, {-5, 0, 1}), false);
  REQUIRE(B2.points.size() == 1);
  CHECK(B2.points[0].e == 2);
  CHECK(B2.points[0].f == 1);
  CHECK_FALSE(B2.points[0].in_Ksh());

  auto F7 = make_padic(7);
  auto B3 = split_boundary(P(F7, {-1, -1, 1}), false);
  REQUIRE(B3.points.size() == 1);
  CHECK(B3.points[0].e == 1);
  CHECK(B3.points[0].f == 2);
  CHECK(B3.points[0].in_Ksh());

  auto B4 = split_boundary(P(F5, {-1, -1, 1}), false);
  REQUIRE(B4.points.size() == 1);
  auto r4 = classify_ramification(B4.points[0]);
  CHECK(r4.e == 2);
  CHECK(r4.f == 1);

  auto F3 = make_padic(3);
  auto r5 = classify_ramification(split_boundary(P(F3, {1, 0, 1}), false).points[0]);
  CHECK(r5.e == 1);
  CHECK(r5.f == 2);
  CHECK(r5.in_Ksh);

  // x^2 - x - 1 splits over Q_11 (5 is a square mod 11).
  auto B6 = split_boundary(P(make_padic(11), {-1, -1, 1}), true);
  REQUIRE(B6.points.size() == 3);
  CHECK(B6.points[2].at_infinity);
  check_product(B6, P(make_padic(11), {-1, -1, 1}));
}

TEST_CASE("squarefree checks") {
  auto F5 = make_padic(5);
  CHECK_THROWS_AS(split_boundary(P(F5, {0, 0, 1}), false), NotSquarefree);
  CHECK_THROWS_AS(split_boundary(P(F5, {1, 2, 1}), false), NotSquarefree);
  auto L = make_laurent(3);
  Elem t = Elem::pi_power(L, 1);
  // x^3 - t is irreducible and purely inseparable.
  Poly f(L, {-t, Elem::zero(L), Elem::zero(L), Elem::one(L)});
  auto B = split_boundary(f, false);
  REQUIRE(B.points.size() == 1);
  CHECK(B.points[0].e == 3);
  CHECK(B.points[0].f == 1);
  CHECK(classify_ramification(B.points[0]).e == 3);
  // x^3 - t^3 = (x - t)^3.
  Poly g(L, {-t.pow(3), Elem::zero(L), Elem::zero(L), Elem::one(L)});
  CHECK_THROWS_AS(split_boundary(g, false), NotSquarefree);
  // (x^3 - t)(x - 1) has an inseparable factor but is squarefree.
  auto B2 = split_boundary(f * P(L, {-1, 1}), false);
  CHECK(B2.points.size() == 2);
}

TEST_CASE("random products of known factors") {
  std::mt19937_64 rng(1234);
  for (std::uint64_t p : {3, 5, 7}) {
    auto F = make_padic(p);
    const auto& R = *F->residue;
    for (int trial = 0; trial < 25; ++trial) {
      // Oracle data: a list of (degree, e, f) of the chosen irreducible factors.
      std::vector<std::tuple<int, int, int>> expect;
      Poly f = Poly::constant(Elem::one(F));
      int parts = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < parts; ++i) {
        int kind = static_cast<int>(rng() % 3);
        long shift = static_cast<long>(rng() % p);
        Poly fac(F);
        if (kind == 0) {
          // Eisenstein of degree 2 or 3, translated.
          int n = 2 + static_cast<int>(rng() % 2);
          std::vector<long> c(n + 1, 0);
          c[n] = 1;
          for (int j = 1; j < n; ++j) c[j] = static_cast<long>(p * (rng() % 3));
          c[0] = static_cast<long>(p * (1 + rng() % (p - 1)));
          fac = Poly::from_longs(F, c);
          expect.emplace_back(n, n, 1);
        } else if (kind == 1) {
          // Unramified: lift of an irreducible residue polynomial.
          int n = 2;
          FPoly r;
          do {
            r = {R.from_int(static_cast<long>(rng() % p)), R.from_int(static_cast<long>(rng() % p)), R.one()};
          } while (!fpoly::is_irreducible(R, r));
          fac = lift(F, r) + Poly::constant(Elem::from_long(F, static_cast<long>(p * (rng() % 5))));
          expect.emplace_back(n, 1, n);
        } else {
          fac = P(F, {-static_cast<long>(rng() % 200) - 1, 1});
          expect.emplace_back(1, 1, 1);
        }
        fac = fac.shift_scale(Elem::from_long(F, -shift), Elem::one(F));
        f = f * fac;
      }
      try {
        check_squarefree(f);
      } catch (const NotSquarefree&) {
        continue;
      }
      auto B = split_boundary(f, false);
      std::vector<std::tuple<int, int, int>> got;
      for (auto& pt : B.points) {
        got.emplace_back(pt.degree, pt.e, pt.f);
        CHECK(pt.e * pt.f == pt.degree);
      }
      std::sort(expect.begin(), expect.end());
      std::sort(got.begin(), got.end());
      CHECK(got == expect);
      check_product(B, f);
    }
  }
}

TEST_CASE("close roots separate") {
  auto F = make_padic(5);
  // (x - 1/3)(x - 1/3 - 5^10)
  Elem r = Elem::from_rational(F, 1, 3);
  Elem s = r + Elem::pi_power(F, 10);
  Poly f = Poly(F, {-r, Elem::one(F)}) * Poly(F, {-s, Elem::one(F)});
  auto B = split_boundary(f, false);
  REQUIRE(B.points.size() == 2);
  CHECK(B.points[0].poly.is_exact());
  CHECK(B.points[1].poly.is_exact());
}

TEST_CASE("unramified roots whose digits cross conjugates") {
  // Roots 6 sqrt2, -6 sqrt2 and 4 sqrt2, -4 sqrt2 over Q_5: each factor has
  // residual x^2 - 2 and the level-one digits of one are the conjugates of
  // the other.
  auto F = make_padic(5);
  auto B = split_boundary(Poly::from_longs(F, {-72, 0, 1}) * Poly::from_longs(F, {-32, 0, 1}), false);
  REQUIRE(B.points.size() == 2);
  for (const auto& b : B.points) {
    CHECK(b.e == 1);
    CHECK(b.f == 2);
    CHECK(b.poly.is_exact());
  }
}

TEST_CASE("curve classes") {
  CHECK(classify_curve(CurveKind::P1, 0, false, true).cls == CurveClass::NO_MODEL_P1);
  CHECK(classify_curve(CurveKind::P1, 1, true, true).cls == CurveClass::NO_MODEL_A1);
  CHECK(classify_curve(CurveKind::P1, 2, false, true).cls == CurveClass::GENUS0_OPEN);
  CHECK(classify_curve(CurveKind::P1, 1, false, true).cls == CurveClass::GENUS0_OPEN);
  CHECK(classify_curve(CurveKind::Conic, 1, false, false).cls == CurveClass::CONIC_ANISOTROPIC_OPEN);
  CHECK(classify_curve(CurveKind::Elliptic, 0, false, false).cls == CurveClass::ELLIPTIC);
}

TEST_CASE("conic examples") {
  auto F3 = make_padic(3);
  auto one = Elem::one(F3);
  CHECK(conic_has_rational_point(one, one, -one));
  CHECK_FALSE(conic_has_rational_point(one, one, Elem::from_long(F3, -3)));
  auto F2 = make_padic(2);
  auto o2 = Elem::one(F2);
  CHECK_FALSE(conic_has_rational_point(o2, o2, o2));
  CHECK(conic_has_rational_point(o2, o2, -o2));
  // Over the unramified quadratic extension every conic from the base splits.
  auto F9 = extend_unramified(F3, 2);
  CHECK(conic_has_rational_point(Elem::one(F9), Elem::one(F9), Elem::from_long(F9, -3)));
  CHECK_THROWS_AS(conic_has_rational_point(Elem::one(make_laurent(2)), Elem::one(make_laurent(2)),
                                           Elem::one(make_laurent(2))),
                  Char2Unsupported);
}

TEST_CASE("conic isotropy matches the Hilbert symbol") {
  std::mt19937_64 rng(99);
  for (auto F : {make_padic(3), make_padic(5), make_padic(7), make_laurent(5), extend_unramified(make_padic(3), 2)}) {
    for (int trial = 0; trial < 40; ++trial) {
      auto rnd = [&]() {
        long v;
        do v = static_cast<long>(rng() % 40) - 20;
        while (v == 0 || v % static_cast<long>(F->p) == 0);
        return Elem::from_long(F, v).mul_pi(static_cast<long>(rng() % 4));
      };
      Elem a = rnd(), b = rnd(), c = rnd();
      bool iso = hilbert_odd(-a * c, -b * c) == 1;
      CHECK(conic_has_rational_point(a, b, c) == iso);
      auto pt = conic_point(a, b, c);
      CHECK(pt.has_value() == iso);
      if (pt) {
        Elem q = a * (*pt)[0] * (*pt)[0] + b * (*pt)[1] * (*pt)[1] + c * (*pt)[2] * (*pt)[2];
        CHECK(q.val_bound() >= 20);
      }
    }
  }
}

TEST_CASE("2-adic conic points") {
  auto F = make_padic(2, 40);
  std::vector<std::array<long, 3>> cases = {{1, 1, -1}, {1, -2, -7}, {3, 5, -2}, {1, 1, -2}, {1, 7, 2}};
  for (auto [a, b, c] : cases) {
    Elem A = Elem::from_long(F, a), Bc = Elem::from_long(F, b), C = Elem::from_long(F, c);
    auto pt = conic_point(A, Bc, C);
    if (!pt) continue;
    Elem q = A * (*pt)[0] * (*pt)[0] + Bc * (*pt)[1] * (*pt)[1] + C * (*pt)[2] * (*pt)[2];
    CHECK(q.val_bound() >= 20);
  }
}
