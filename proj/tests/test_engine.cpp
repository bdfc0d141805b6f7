// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <random>
#include <set>

#include "doctest.h"
#include "neron/engine.hpp"

using namespace neron;

namespace {

Poly P(const Base& F, std::vector<long> c) { return Poly::from_longs(F, c); }

long vp(long x, long p) {
  if (x == 0) return 1000;
  long v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

long mod(long a, long m) { return ((a % m) + m) % m; }

bool same_location(const Mark& a, const Mark& b) {
  if (a.status == Status::PARKED || b.status == Status::PARKED) return false;
  return a.node == b.node && a.residue_infinity == b.residue_infinity &&
         (a.residue_infinity || a.residue == b.residue);
}

// (x - a)^2 - p^(2k+1) u: a ramified point whose roots agree with a to
// valuation k + 1/2.
struct RamPoint {
  long a, k, u;
};

Poly ram_poly(const Base& F, long p, const RamPoint& r) {
  long pk = 1;
  for (int i = 0; i < 2 * r.k + 1; ++i) pk *= p;
  return P(F, {r.a * r.a - pk * r.u, -2 * r.a, 1});
}

// Bareiss determinant of an integer matrix.
mpz_class det(std::vector<std::vector<mpz_class>> M) {
  const size_t n = M.size();
  mpz_class prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (M[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && M[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(M[k], M[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
    prev = M[k][k];
  }
  return sign * M[n - 1][n - 1];
}

// Valuation of the discriminant of a monic integer polynomial via the
// Sylvester matrix of f and f'.
long disc_val(const std::vector<mpz_class>& f, unsigned long p) {
  const int n = static_cast<int>(f.size()) - 1;
  std::vector<mpz_class> d;
  for (int i = 1; i <= n; ++i) d.push_back(f[i] * i);
  const int m = n - 1, N = n + m;
  std::vector<std::vector<mpz_class>> S(N, std::vector<mpz_class>(N, 0));
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) S[r][r + i] = f[n - i];
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) S[m + r][r + i] = d[m - i];
  mpz_class D = det(S);
  if (D == 0) return 1000;
  long v = 0;
  while (mpz_divisible_ui_p(D.get_mpz_t(), p)) {
    D /= p;
    ++v;
  }
  return v;
}

}  // namespace

TEST_CASE("initial specialization examples") {
  auto F5 = make_padic(5);
  auto T = initial_specialize(split_boundary(P(F5, {0, 1}), true), F5);
  REQUIRE(T.marks.size() == 2);
  CHECK(T.marks[0].node == 0);
  CHECK_FALSE(T.marks[0].residue_infinity);
  CHECK(F5->residue->is_zero(T.marks[0].residue));
  CHECK(T.marks[1].residue_infinity);
  CHECK(T.marks[0].status == Status::RATIONAL_CERT);

  auto T2 = initial_specialize(split_boundary(P(F5, {-5, 0, 1}), false), F5);
  CHECK(T2.marks[0].status == Status::ACTIVE);
  CHECK(F5->residue->is_zero(T2.marks[0].residue));

  auto T3 = initial_specialize(split_boundary(P(F5, {-1, -1, 1}), false), F5);
  CHECK(T3.marks[0].residue == F5->residue->from_int(3));
  CHECK_FALSE(equals_X_minus_Delta(T3));
}

TEST_CASE("step extracts digits of a rational point") {
  auto F5 = make_padic(5);
  auto T = initial_specialize(split_boundary(P(F5, {-7, 1}), false), F5);
  CHECK(T.marks[0].residue == F5->residue->from_int(2));
  auto U = step(T);
  CHECK(U.stage == 1);
  CHECK(U.marks[0].node == 1);
  CHECK(U.marks[0].residue == F5->residue->from_int(1));
  CHECK(U.marks[0].status == Status::RATIONAL_CERT);
}

TEST_CASE("G_m chain") {
  auto F5 = make_padic(5);
  auto delta = split_boundary(P(F5, {0, 1}), true);
  for (int n : {1, 2, 3, 5}) {
    RunOptions opt;
    opt.max_depth = n;
    auto t0 = std::chrono::steady_clock::now();
    NeronReport R = run(delta, opt);
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 1.0);
    CHECK(R.verdict == Verdict::LFT_NOT_FINITE_TYPE);
    CHECK(R.truncated);
    CHECK(R.stages == n);
    CHECK(R.components.size() == static_cast<size_t>(2 * n + 1));
    for (auto& c : R.components) CHECK(c.punctures == 2);
    CHECK(R.certificate.find("rational point x") != std::string::npos);
    CHECK(R.edges.size() == static_cast<size_t>(2 * n));
  }
}

TEST_CASE("ramified quadratic parks at the node") {
  auto F5 = make_padic(5);
  auto delta = split_boundary(P(F5, {-5, 0, 1}), false);
  auto T0 = initial_specialize(delta, F5);
  CHECK_FALSE(equals_X_minus_Delta(T0));
  auto T1 = step(T0);
  CHECK(equals_X_minus_Delta(T1));
  CHECK(T1.marks[0].status == Status::PARKED);
  CHECK(T1.marks[0].child == 1);

  NeronReport R = run(delta);
  CHECK(R.verdict == Verdict::FINITE_TYPE);
  CHECK_FALSE(R.truncated);
  CHECK(R.stages == 1);
  REQUIRE(R.components.size() == 2);
  for (auto& c : R.components) CHECK(c.punctures == 1);
  REQUIRE(R.boundary.size() == 1);
  CHECK(R.boundary[0].status == "PARKED");
  CHECK(R.boundary[0].location == "edge 0-1");
  CHECK(R.edge_notes[0] == "x^2 - 5");
  CHECK(R.equals_X_minus_Delta);
  CHECK(R.components[1].provenance == "X0:x=0");
}

TEST_CASE("x^2 - x - 1 over Q_5 and Q_7") {
  auto F5 = make_padic(5);
  NeronReport R5 = run(split_boundary(P(F5, {-1, -1, 1}), false));
  CHECK(R5.verdict == Verdict::FINITE_TYPE);
  CHECK(R5.stages == 1);
  CHECK(R5.components[1].provenance == "X0:x=3");

  auto F7 = make_padic(7);
  RunOptions opt;
  opt.max_depth = 3;
  NeronReport R7 = run(split_boundary(P(F7, {-1, -1, 1}), false), opt);
  CHECK(R7.verdict == Verdict::LFT_NOT_FINITE_TYPE);
  CHECK(R7.tower == 2);
  CHECK(R7.certificate.find("f=2") != std::string::npos);
  // Two conjugate rational points over the quadratic tower: two chains.
  CHECK(R7.components.size() == 7);
  CHECK(R7.boundary[0].status == "RATIONAL_CERT");
}

TEST_CASE("non-square unit splits into a chain over the tower") {
  auto F3 = make_padic(3);
  RunOptions opt;
  opt.max_depth = 2;
  NeronReport R = run(split_boundary(P(F3, {1, 0, 1}), false), opt);
  CHECK(R.verdict == Verdict::LFT_NOT_FINITE_TYPE);
  CHECK(R.tower == 2);
  CHECK(R.components.size() == 5);
  int towered = 0;
  for (auto& c : R.components) towered += c.tower == 2;
  CHECK(towered == 4);
}

TEST_CASE("dilatations") {
  auto F5 = make_padic(5);
  auto T = initial_specialize(split_boundary(P(F5, {-5, 0, 1}), false), F5);
  auto& R = *F5->residue;
  auto U = dilate(T, 0, R.zero());
  CHECK(U.nodes.size() == 2);
  CHECK_FALSE(U.nodes[0].retained);
  CHECK(U.nodes[1].retained);
  auto V = dilate(U, 0, R.from_int(2));
  CHECK(V.nodes.size() == 3);
  CHECK(V.nodes[1].retained);
  CHECK(V.nodes[2].retained);
  CHECK_THROWS_AS(dilate(V, 0, R.zero()), CenterNotSmooth);
  CHECK(sections_meet_every_exceptional_divisor(U));
  CHECK_FALSE(sections_meet_every_exceptional_divisor(V));
}

TEST_CASE("empty boundary equals X minus Delta") {
  auto F5 = make_padic(5);
  BoundarySet d;
  d.F = F5;
  auto T = initial_specialize(d, F5);
  CHECK(equals_X_minus_Delta(T));
}

TEST_CASE("random ramified configurations against the digit oracle") {
  std::mt19937 rng(11);
  for (long p : {3L, 5L}) {
    auto F = make_padic(p);
    for (int trial = 0; trial < 40; ++trial) {
      const int count = 1 + static_cast<int>(rng() % 3);
      std::vector<RamPoint> pts;
      Poly prod = P(F, {1});
      std::vector<mpz_class> prodz = {1};
      for (int i = 0; i < count; ++i) {
        RamPoint r{static_cast<long>(rng() % (p * p * p)), static_cast<long>(rng() % 3),
                   1 + static_cast<long>(rng() % (p - 1))};
        bool dup = false;
        for (auto& q : pts) dup = dup || (q.a == r.a && q.k == r.k && q.u == r.u);
        if (dup) continue;
        pts.push_back(r);
        Poly f = ram_poly(F, p, r);
        prod = prod * f;
        long pk = 1;
        for (int j = 0; j < 2 * r.k + 1; ++j) pk *= p;
        std::vector<mpz_class> fz = {mpz_class(r.a * r.a - pk * r.u), mpz_class(-2 * r.a), 1};
        std::vector<mpz_class> nz(prodz.size() + 2, 0);
        for (size_t x = 0; x < prodz.size(); ++x)
          for (size_t y = 0; y < 3; ++y) nz[x + y] += prodz[x] * fz[y];
        prodz = nz;
      }
      auto delta = split_boundary(prod, false);
      Verdict v;
      auto T = run_tree(delta, {}, &v);
      CHECK(v == Verdict::FINITE_TYPE);

      long maxk = 0;
      std::set<std::pair<long, long>> nodes;
      for (auto& r : pts) {
        maxk = std::max(maxk, r.k);
        long pn = 1;
        for (long n = 1; n <= r.k + 1; ++n) {
          pn *= p;
          nodes.insert({n, mod(r.a, pn)});
        }
      }
      CHECK(T.stage == maxk + 1);
      CHECK(T.nodes.size() == nodes.size() + 1);
      if (p == 3 || pts.size() > 1) CHECK(T.stage <= disc_val(prodz, p));

      // Two points share an active location at stage n only if n < v(a - b).
      auto S = initial_specialize(delta, F);
      std::vector<BlowupTree> stages = {S};
      while (S.active_count() > 0) {
        S = step(S);
        stages.push_back(S);
      }
      for (size_t n = 0; n < stages.size(); ++n) {
        const auto& St = stages[n];
        for (size_t i = 0; i < St.points.size(); ++i)
          for (size_t j = i + 1; j < St.points.size(); ++j) {
            if (!same_location(St.marks[i], St.marks[j])) continue;
            // recover centers from the defining polynomials
            long ai = 0, aj = 0;
            for (auto& r : pts) {
              if (ram_poly(F, p, r).str() == St.points[i].xpoly.str()) ai = r.a;
              if (ram_poly(F, p, r).str() == St.points[j].xpoly.str()) aj = r.a;
            }
            CHECK(static_cast<long>(n) < vp(ai - aj, p));
          }
      }
      // Parking permanence: a parked mark never moves.
      for (size_t n = 1; n < stages.size(); ++n)
        for (size_t i = 0; i < stages[n].marks.size(); ++i) {
          const Mark& a = stages[n - 1].marks[i];
          if (a.status != Status::PARKED) continue;
          const Mark& b = stages[n].marks[i];
          CHECK(b.status == Status::PARKED);
          CHECK(b.node == a.node);
          CHECK(b.child == a.child);
        }
    }
  }
}

TEST_CASE("rational points share a location exactly while congruent") {
  std::mt19937 rng(5);
  auto F = make_padic(3);
  for (int trial = 0; trial < 30; ++trial) {
    long a = static_cast<long>(rng() % 243), b = static_cast<long>(rng() % 243);
    if (a == b) continue;
    auto delta = split_boundary(P(F, {-a, 1}) * P(F, {-b, 1}), false);
    auto T = initial_specialize(delta, F);
    for (long n = 0; n < 7; ++n) {
      CHECK(same_location(T.marks[0], T.marks[1]) == (n < vp(a - b, 3)));
      T = step(T);
    }
  }
}

TEST_CASE("base change commutes with the construction") {
  std::vector<std::pair<long, std::vector<long>>> jobs = {
      {5, {-5, 0, 1}}, {5, {-1, -1, 1}}, {7, {-1, -1, 1}}, {3, {1, 0, 1}}, {5, {0, -5, 1}}, {5, {-10, 0, 1, 0, 0, 0}},
      {3, {-3, 0, 0, 1}}, {5, {-2, 0, 1}}};
  for (auto& [p, c] : jobs) {
    auto F = make_padic(p);
    Poly f = P(F, c);
    f.trim();
    RunOptions opt;
    opt.max_depth = 3;
    auto T = run_tree(split_boundary(f, false), opt);
    for (int m : {2, 3}) {
      auto G = extend_unramified(F, m);
      auto U = run_tree(split_boundary(f.reembed(G), false), opt);
      CHECK(canonical_shape(T) == canonical_shape(U));
    }
  }
}

TEST_CASE("report ordering and dot are stable") {
  auto F5 = make_padic(5);
  RunOptions opt;
  opt.max_depth = 3;
  NeronReport R = run(split_boundary(P(F5, {0, 1}), true), opt);
  const std::string d = dot(R);
  CHECK(d == dot(run(split_boundary(P(F5, {0, 1}), true), opt)));
  CHECK(d.find("n0 -- n1") != std::string::npos);
  for (size_t i = 1; i < R.components.size(); ++i) CHECK(R.components[i - 1].depth <= R.components[i].depth);
  // A path graph on 7 nodes: two leaves, five of degree two.
  std::vector<int> deg(R.components.size(), 0);
  for (auto& e : R.edges) {
    ++deg[e.first];
    ++deg[e.second];
  }
  int leaves = 0;
  for (int x : deg) leaves += x == 1;
  CHECK(leaves == 2);
}

TEST_CASE("conic open models") {
  auto F3 = make_padic(3);
  auto one = Elem::one(F3);
  NeronReport R = conic_open_model(one, one, -one, P(F3, {-3, 0, 1}));
  CHECK(R.verdict == Verdict::FINITE_TYPE);
  CHECK(R.curve_class == "GENUS0_OPEN");

  NeronReport A = conic_open_model(one, one, Elem::from_long(F3, -3), P(F3, {-3, 0, 1}));
  CHECK(A.curve_class == "CONIC_ANISOTROPIC_OPEN");
  CHECK(A.verdict == Verdict::FINITE_TYPE);

  RunOptions opt;
  opt.max_depth = 2;
  NeronReport C = conic_open_model(one, one, -one, P(F3, {0, 1}), opt);
  CHECK(C.verdict == Verdict::LFT_NOT_FINITE_TYPE);
}
