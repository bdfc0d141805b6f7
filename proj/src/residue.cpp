// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#include "neron/residue.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <tuple>

namespace neron {

namespace {

std::vector<int> prime_divisors(int n) {
  std::vector<int> out;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool rabin_irreducible(const FiniteField& Fp, const FPoly& m) {
  const int n = fpoly::degree(m);
  if (n <= 0) return false;
  if (n == 1) return true;
  FPoly x = fpoly::x(Fp);
  const mpz_class p(Fp.p());
  for (int r : prime_divisors(n)) {
    mpz_class e;
    mpz_pow_ui(e.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n / r));
    FPoly h = fpoly::sub(Fp, fpoly::powmod(Fp, x, e, m), x);
    if (fpoly::degree(fpoly::gcd(Fp, h, m)) != 0) return false;
  }
  mpz_class e;
  mpz_pow_ui(e.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n));
  FPoly h = fpoly::sub(Fp, fpoly::powmod(Fp, x, e, m), x);
  return fpoly::degree(h) < 0;
}

}  // namespace

FiniteField::FiniteField(std::uint64_t p, int degree) : p_(p), n_(degree) {
  if (p < 2 || degree < 1) throw std::invalid_argument("finite field needs p >= 2 and degree >= 1");
  if (p >= (std::uint64_t{1} << 32)) throw std::invalid_argument("residue characteristic too large");
  if (n_ == 1) {
    mod_ = {0, 1};
    return;
  }
  FiniteField prime(p, 1);
  // Enumerate monic candidates in lexicographic order of (c_{n-1}, ..., c_0).
  std::vector<std::uint64_t> c(n_, 0);
  while (true) {
    if (c[0] != 0) {
      FPoly cand;
      for (int i = 0; i < n_; ++i) cand.push_back({c[i]});
      cand.push_back({1});
      if (rabin_irreducible(prime, cand)) {
        mod_.assign(c.begin(), c.end());
        mod_.push_back(1);
        return;
      }
    }
    int i = 0;
    while (i < n_ && ++c[i] == p) c[i++] = 0;
    if (i == n_) throw std::logic_error("no irreducible polynomial found");
  }
}

mpz_class FiniteField::order() const {
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(n_));
  return q;
}

std::uint64_t FiniteField::mulmod(std::uint64_t a, std::uint64_t b) const {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p_);
}

std::uint64_t FiniteField::invmod(std::uint64_t a) const {
  long long t = 0, nt = 1;
  long long r = static_cast<long long>(p_), nr = static_cast<long long>(a % p_);
  if (nr == 0) throw std::domain_error("inverse of zero in residue field");
  while (nr != 0) {
    long long q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (t < 0) t += static_cast<long long>(p_);
  return static_cast<std::uint64_t>(t);
}

FiniteField::Elt FiniteField::one() const {
  Elt r(n_, 0);
  r[0] = 1;
  return r;
}

FiniteField::Elt FiniteField::gen() const {
  Elt r(n_, 0);
  if (n_ > 1) r[1] = 1;
  return r;
}

FiniteField::Elt FiniteField::from_int(long long v) const {
  Elt r(n_, 0);
  long long m = v % static_cast<long long>(p_);
  if (m < 0) m += static_cast<long long>(p_);
  r[0] = static_cast<std::uint64_t>(m);
  return r;
}

FiniteField::Elt FiniteField::from_coords(std::vector<std::uint64_t> c) const {
  c.resize(n_, 0);
  for (auto& v : c) v %= p_;
  return c;
}

bool FiniteField::is_zero(const Elt& a) const {
  return std::all_of(a.begin(), a.end(), [](std::uint64_t v) { return v == 0; });
}

bool FiniteField::is_one(const Elt& a) const {
  if (a[0] != 1) return false;
  for (int i = 1; i < n_; ++i)
    if (a[i] != 0) return false;
  return true;
}

FiniteField::Elt FiniteField::add(const Elt& a, const Elt& b) const {
  Elt r(n_);
  for (int i = 0; i < n_; ++i) {
    std::uint64_t s = a[i] + b[i];
    r[i] = s >= p_ ? s - p_ : s;
  }
  return r;
}

FiniteField::Elt FiniteField::sub(const Elt& a, const Elt& b) const {
  Elt r(n_);
  for (int i = 0; i < n_; ++i) r[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + p_ - b[i];
  return r;
}

FiniteField::Elt FiniteField::neg(const Elt& a) const {
  Elt r(n_);
  for (int i = 0; i < n_; ++i) r[i] = a[i] == 0 ? 0 : p_ - a[i];
  return r;
}

FiniteField::Elt FiniteField::scale(const Elt& a, std::uint64_t c) const {
  Elt r(n_);
  for (int i = 0; i < n_; ++i) r[i] = mulmod(a[i], c % p_);
  return r;
}

FiniteField::Elt FiniteField::mul(const Elt& a, const Elt& b) const {
  if (n_ == 1) return {mulmod(a[0], b[0])};
  std::vector<std::uint64_t> prod(2 * n_ - 1, 0);
  for (int i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n_; ++j) {
      if (b[j] == 0) continue;
      prod[i + j] = (prod[i + j] + mulmod(a[i], b[j])) % p_;
    }
  }
  for (int k = 2 * n_ - 2; k >= n_; --k) {
    std::uint64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (int i = 0; i < n_; ++i) {
      std::uint64_t t = mulmod(c, mod_[i]);
      std::uint64_t& slot = prod[k - n_ + i];
      slot = slot >= t ? slot - t : slot + p_ - t;
    }
  }
  prod.resize(n_);
  return prod;
}

FiniteField::Elt FiniteField::pow(const Elt& a, const mpz_class& e) const {
  if (e < 0) return pow(inv(a), -e);
  Elt result = one();
  Elt base = a;
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = 0; i < bits; ++i) {
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mul(result, base);
    if (i + 1 < bits) base = mul(base, base);
  }
  return result;
}

FiniteField::Elt FiniteField::inv(const Elt& a) const {
  if (is_zero(a)) throw std::domain_error("inverse of zero in residue field");
  if (n_ == 1) return {invmod(a[0])};
  return pow(a, order() - 2);
}

FiniteField::Elt FiniteField::pth_root(const Elt& a) const {
  if (n_ == 1) return a;
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(n_ - 1));
  return pow(a, e);
}

int FiniteField::element_degree(const Elt& a) const {
  for (int d = 1; d < n_; ++d) {
    if (n_ % d != 0) continue;
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(d));
    if (pow(a, e) == a) return d;
  }
  return n_;
}

bool FiniteField::is_square(const Elt& a) const {
  if (p_ == 2 || is_zero(a)) return true;
  return is_one(pow(a, (order() - 1) / 2));
}

int FiniteField::compare(const Elt& a, const Elt& b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::string FiniteField::to_string(const Elt& a) const {
  mpz_class code = 0;
  for (int i = n_ - 1; i >= 0; --i) code = code * static_cast<unsigned long>(p_) + static_cast<unsigned long>(a[i]);
  return code.get_str();
}

FiniteField::Elt FiniteField::embedding_image(const FiniteField& target) const {
  if (target.p() != p_ || target.degree() % n_ != 0) throw std::invalid_argument("no field embedding");
  if (n_ == 1) return target.zero();
  FPoly m;
  for (std::uint64_t c : mod_) m.push_back(target.from_int(static_cast<long long>(c)));
  auto rs = fpoly::roots(target, m);
  if (rs.empty()) throw std::logic_error("modulus has no root in extension");
  return rs.front().first;
}

FiniteField::Elt FiniteField::embed(const Elt& a, const FiniteField& target, const Elt& gen_image) const {
  Elt r = target.zero();
  Elt pw = target.one();
  for (int i = 0; i < n_; ++i) {
    if (a[i] != 0) r = target.add(r, target.scale(pw, a[i]));
    if (i + 1 < n_) pw = target.mul(pw, gen_image);
  }
  return r;
}

FieldPtr finite_field(std::uint64_t p, int degree) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, int>, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const FiniteField>(p, degree);
  cache.emplace(key, f);
  return f;
}

namespace fpoly {

int degree(const FPoly& f) { return static_cast<int>(f.size()) - 1; }

void trim(const FiniteField& F, FPoly& f) {
  while (!f.empty() && F.is_zero(f.back())) f.pop_back();
}

FPoly constant(const FiniteField& F, const FiniteField::Elt& c) {
  if (F.is_zero(c)) return {};
  return {c};
}

FPoly x(const FiniteField& F) { return {F.zero(), F.one()}; }

FPoly add(const FiniteField& F, const FPoly& a, const FPoly& b) {
  FPoly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  trim(F, r);
  return r;
}

FPoly sub(const FiniteField& F, const FPoly& a, const FPoly& b) {
  FPoly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  trim(F, r);
  return r;
}

FPoly mul(const FiniteField& F, const FPoly& a, const FPoly& b) {
  if (a.empty() || b.empty()) return {};
  FPoly r(a.size() + b.size() - 1, F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (F.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(F, r);
  return r;
}

FPoly scale(const FiniteField& F, const FPoly& a, const FiniteField::Elt& c) {
  FPoly r;
  for (const auto& v : a) r.push_back(F.mul(v, c));
  trim(F, r);
  return r;
}

std::pair<FPoly, FPoly> divrem(const FiniteField& F, const FPoly& a, const FPoly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  FPoly r = a;
  trim(F, r);
  const int db = degree(b);
  if (degree(r) < db) return {{}, r};
  FPoly q(r.size() - b.size() + 1, F.zero());
  const auto lead_inv = F.inv(b.back());
  for (int k = degree(r); k >= db; --k) {
    const auto c = F.mul(r[k], lead_inv);
    q[k - db] = c;
    if (F.is_zero(c)) continue;
    for (int i = 0; i <= db; ++i) r[k - db + i] = F.sub(r[k - db + i], F.mul(c, b[i]));
  }
  trim(F, r);
  trim(F, q);
  return {q, r};
}

FPoly rem(const FiniteField& F, const FPoly& a, const FPoly& b) { return divrem(F, a, b).second; }

FPoly monic(const FiniteField& F, const FPoly& a) {
  if (a.empty()) return a;
  return scale(F, a, F.inv(a.back()));
}

FPoly gcd(const FiniteField& F, const FPoly& a, const FPoly& b) {
  FPoly u = a, v = b;
  trim(F, u);
  trim(F, v);
  while (!v.empty()) {
    FPoly r = rem(F, u, v);
    u = std::move(v);
    v = std::move(r);
  }
  return monic(F, u);
}

std::tuple<FPoly, FPoly, FPoly> xgcd(const FiniteField& F, const FPoly& a, const FPoly& b) {
  FPoly r0 = a, r1 = b;
  trim(F, r0);
  trim(F, r1);
  FPoly s0 = constant(F, F.one()), s1 = {};
  FPoly t0 = {}, t1 = constant(F, F.one());
  while (!r1.empty()) {
    auto [q, r] = divrem(F, r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    FPoly s2 = sub(F, s0, mul(F, q, s1));
    FPoly t2 = sub(F, t0, mul(F, q, t1));
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) return {r0, s0, t0};
  const auto li = F.inv(r0.back());
  return {scale(F, r0, li), scale(F, s0, li), scale(F, t0, li)};
}

FPoly derivative(const FiniteField& F, const FPoly& a) {
  FPoly r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(F.scale(a[i], static_cast<std::uint64_t>(i % F.p())));
  trim(F, r);
  return r;
}

FPoly powmod(const FiniteField& F, const FPoly& a, const mpz_class& e, const FPoly& m) {
  FPoly result = rem(F, constant(F, F.one()), m);
  FPoly base = rem(F, a, m);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = 0; i < bits; ++i) {
    if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(F, mul(F, result, base), m);
    if (i + 1 < bits) base = rem(F, mul(F, base, base), m);
  }
  return result;
}

FiniteField::Elt eval(const FiniteField& F, const FPoly& a, const FiniteField::Elt& v) {
  auto r = F.zero();
  for (std::size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, v), a[i]);
  return r;
}

bool equal(const FPoly& a, const FPoly& b) { return a == b; }

std::string to_string(const FiniteField& F, const FPoly& a, const std::string& var) {
  if (a.empty()) return "0";
  std::string out;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (F.is_zero(a[i])) continue;
    if (!out.empty()) out += " + ";
    const std::string c = F.to_string(a[i]);
    if (i == 0) {
      out += c;
    } else {
      if (!F.is_one(a[i])) out += c + "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

namespace {

int compare_poly(const FPoly& a, const FPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    int c = FiniteField::compare(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

std::vector<std::pair<FPoly, int>> squarefree(const FiniteField& F, const FPoly& f) {
  std::vector<std::pair<FPoly, int>> out;
  FPoly df = derivative(F, f);
  if (df.empty()) {
    // f is a polynomial in y^p: take the p-th root coefficientwise.
    FPoly g;
    for (std::size_t i = 0; i < f.size(); i += F.p()) g.push_back(F.pth_root(f[i]));
    for (auto& [h, m] : squarefree(F, g)) out.emplace_back(h, m * static_cast<int>(F.p()));
    return out;
  }
  FPoly c = gcd(F, f, df);
  FPoly w = divrem(F, f, c).first;
  int i = 1;
  while (degree(w) > 0) {
    FPoly y = gcd(F, w, c);
    FPoly fac = divrem(F, w, y).first;
    if (degree(fac) > 0) out.emplace_back(monic(F, fac), i);
    w = y;
    c = divrem(F, c, y).first;
    ++i;
  }
  if (degree(c) > 0) {
    FPoly g;
    for (std::size_t k = 0; k < c.size(); k += F.p()) g.push_back(F.pth_root(c[k]));
    for (auto& [h, m] : squarefree(F, g)) out.emplace_back(h, m * static_cast<int>(F.p()));
  }
  return out;
}

std::vector<std::pair<FPoly, int>> distinct_degree(const FiniteField& F, FPoly f) {
  std::vector<std::pair<FPoly, int>> out;
  const mpz_class q = F.order();
  FPoly xx = x(F);
  FPoly h = xx;
  int d = 0;
  while (degree(f) >= 2 * (d + 1)) {
    ++d;
    h = powmod(F, h, q, f);
    FPoly g = gcd(F, sub(F, h, xx), f);
    if (degree(g) > 0) {
      out.emplace_back(g, d);
      f = divrem(F, f, g).first;
      h = rem(F, h, f);
    }
  }
  if (degree(f) > 0) out.emplace_back(monic(F, f), degree(f));
  return out;
}

void equal_degree(const FiniteField& F, const FPoly& f, int d, std::mt19937_64& rng,
                  std::vector<FPoly>& out) {
  const int n = degree(f);
  if (n == d) {
    out.push_back(monic(F, f));
    return;
  }
  mpz_class qd;
  mpz_pow_ui(qd.get_mpz_t(), F.order().get_mpz_t(), static_cast<unsigned long>(d));
  std::uniform_int_distribution<std::uint64_t> coin(0, F.p() - 1);
  while (true) {
    FPoly a;
    for (int i = 0; i < n; ++i) {
      FiniteField::Elt c(F.degree());
      for (auto& v : c) v = coin(rng);
      a.push_back(c);
    }
    trim(F, a);
    if (degree(a) <= 0) continue;
    FPoly b;
    if (F.p() == 2) {
      // Trace to F_2 of the algebra element a.
      const long total = static_cast<long>(F.degree()) * d;
      FPoly t = rem(F, a, f);
      FPoly s = t;
      for (long i = 1; i < total; ++i) {
        t = rem(F, mul(F, t, t), f);
        s = add(F, s, t);
      }
      b = s;
    } else {
      b = sub(F, powmod(F, a, (qd - 1) / 2, f), constant(F, F.one()));
    }
    FPoly g = gcd(F, b, f);
    if (degree(g) > 0 && degree(g) < n) {
      equal_degree(F, g, d, rng, out);
      equal_degree(F, divrem(F, f, g).first, d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<FPoly, int>> factor(const FiniteField& F, const FPoly& f0) {
  FPoly f = f0;
  trim(F, f);
  if (degree(f) < 1) return {};
  f = monic(F, f);
  std::mt19937_64 rng(0x6e65726f6eULL);
  std::vector<std::pair<FPoly, int>> out;
  for (auto& [g, m] : squarefree(F, f)) {
    for (auto& [h, d] : distinct_degree(F, g)) {
      std::vector<FPoly> parts;
      equal_degree(F, h, d, rng, parts);
      for (auto& q : parts) out.emplace_back(q, m);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int c = compare_poly(a.first, b.first);
    return c != 0 ? c < 0 : a.second < b.second;
  });
  // Merge equal irreducibles that arose from different squarefree layers.
  std::vector<std::pair<FPoly, int>> merged;
  for (auto& e : out) {
    if (!merged.empty() && merged.back().first == e.first)
      merged.back().second += e.second;
    else
      merged.push_back(e);
  }
  return merged;
}

std::vector<std::pair<FiniteField::Elt, int>> roots(const FiniteField& F, const FPoly& f) {
  std::vector<std::pair<FiniteField::Elt, int>> out;
  for (auto& [g, m] : factor(F, f)) {
    if (degree(g) == 1) out.emplace_back(F.neg(g[0]), m);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return FiniteField::compare(a.first, b.first) < 0; });
  return out;
}

bool is_irreducible(const FiniteField& F, const FPoly& f) {
  auto fs = factor(F, f);
  return fs.size() == 1 && fs[0].second == 1;
}

}  // namespace fpoly

}  // namespace neron
