// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#include "neron/report.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

namespace neron {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------- job files

namespace {

std::string where(const toml::node& n, const std::string& source) {
  const auto& b = n.source().begin;
  return source + ":" + std::to_string(b.line) + ":" + std::to_string(b.column);
}

void only_keys(const toml::table& t, const std::string& name, std::initializer_list<const char*> keys,
               const std::string& source) {
  for (const auto& [k, v] : t) {
    bool ok = false;
    for (const char* allowed : keys) ok = ok || k.str() == allowed;
    if (!ok) throw ParseError(where(v, source) + ": unknown key " + name + "." + std::string(k.str()));
  }
}

const toml::table* table_at(const toml::table& root, const char* name, const std::string& source) {
  const toml::node* n = root.get(name);
  if (!n) return nullptr;
  if (!n->is_table()) throw ParseError(where(*n, source) + ": " + name + " must be a table");
  return n->as_table();
}

std::string get_string(const toml::table& t, const char* key, const std::string& ctx, const std::string& source) {
  const toml::node* n = t.get(key);
  if (!n->is_string()) throw ParseError(where(*n, source) + ": " + ctx + "." + key + " must be a string");
  return n->value<std::string>().value();
}

long get_int(const toml::table& t, const char* key, const std::string& ctx, const std::string& source) {
  const toml::node* n = t.get(key);
  if (!n->is_integer()) throw ParseError(where(*n, source) + ": " + ctx + "." + key + " must be an integer");
  return static_cast<long>(n->value<std::int64_t>().value());
}

Expr coefficient(const toml::node& n, const std::string& source) {
  if (n.is_integer()) return Expr::constant(mpq_class(static_cast<long>(n.value<std::int64_t>().value())));
  if (n.is_string()) {
    try {
      return parse_expr(n.value<std::string>().value());
    } catch (const ParseError& e) {
      throw ParseError(where(n, source) + ": " + e.what());
    }
  }
  throw ParseError(where(n, source) + ": coefficient must be an integer or a string");
}

std::vector<Expr> coefficients(const toml::table& t, const char* key, std::size_t count, const std::string& source) {
  const toml::node* n = t.get(key);
  if (!n->is_array() || n->as_array()->size() != count)
    throw ParseError(where(*n, source) + ": curve." + key + " must be an array of " + std::to_string(count) +
                     " coefficients");
  std::vector<Expr> out;
  for (const auto& c : *n->as_array()) out.push_back(coefficient(c, source));
  return out;
}

std::vector<mpq_class> rational_coeffs(const Expr& f) {
  std::vector<mpq_class> c(static_cast<std::size_t>(std::max(f.degree_x(), 0)) + 1);
  for (const auto& [k, v] : f.terms) c[k.first] = v;
  return c;
}

// Degree of gcd(f, f') over Q.
int rational_gcd_degree(const Expr& f) {
  auto a = rational_coeffs(f);
  std::vector<mpq_class> b;
  for (std::size_t i = 1; i < a.size(); ++i) b.push_back(a[i] * static_cast<long>(i));
  auto trim = [](std::vector<mpq_class>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  trim(a);
  trim(b);
  while (!b.empty()) {
    while (a.size() >= b.size()) {
      const mpq_class q = a.back() / b.back();
      const std::size_t s = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[s + i] -= q * b[i];
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}

}  // namespace

JobSpec parse_job_text(const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    const auto& b = e.source().begin;
    throw ParseError(source + ":" + std::to_string(b.line) + ":" + std::to_string(b.column) + ": " +
                     std::string(e.description()));
  }
  only_keys(root, "job", {"base", "curve", "boundary", "options"}, source);
  JobSpec job;

  const toml::table* base = table_at(root, "base", source);
  if (!base || !base->get("kind")) throw ParseError(source + ": missing base.kind");
  only_keys(*base, "base", {"kind", "p", "q", "place"}, source);
  const std::string kind = get_string(*base, "kind", "base", source);
  auto need = [&](const char* key) {
    if (!base->get(key)) throw ParseError(source + ": base.kind = \"" + kind + "\" needs base." + key);
    const long v = get_int(*base, key, "base", source);
    if (v < 2) throw ParseError(where(*base->get(key), source) + ": base." + key + " must be at least 2");
    return static_cast<std::uint64_t>(v);
  };
  if (kind == "padic") {
    job.base = BaseKind::PAdic;
    job.p = need("p");
  } else if (kind == "laurent") {
    job.base = BaseKind::Laurent;
    job.p = need("q");
    if (base->get("place")) job.place = get_string(*base, "place", "base", source);
  } else if (kind == "global-Q") {
    job.base = BaseKind::GlobalQ;
  } else if (kind == "global-Fq(t)") {
    job.base = BaseKind::GlobalFqt;
    job.p = need("q");
  } else {
    throw ParseError(where(*base->get("kind"), source) + ": unknown base.kind \"" + kind + "\"");
  }
  if (base->get("place") && job.base != BaseKind::Laurent)
    throw ParseError(where(*base->get("place"), source) + ": base.place is only used with kind = \"laurent\"");

  if (const toml::table* curve = table_at(root, "curve", source)) {
    only_keys(*curve, "curve", {"kind", "conic", "weierstrass"}, source);
    const std::string ck = curve->get("kind") ? get_string(*curve, "kind", "curve", source) : "p1";
    if (ck == "p1") {
      job.curve = CurveKind::P1;
    } else if (ck == "conic") {
      job.curve = CurveKind::Conic;
      if (!curve->get("conic")) throw ParseError(source + ": curve.kind = \"conic\" needs curve.conic");
      job.conic = coefficients(*curve, "conic", 3, source);
    } else if (ck == "elliptic") {
      job.curve = CurveKind::Elliptic;
      if (!curve->get("weierstrass")) throw ParseError(source + ": curve.kind = \"elliptic\" needs curve.weierstrass");
      job.weierstrass = coefficients(*curve, "weierstrass", 5, source);
    } else {
      throw ParseError(where(*curve->get("kind"), source) + ": unknown curve.kind \"" + ck + "\"");
    }
    if (curve->get("conic") && job.curve != CurveKind::Conic)
      throw ParseError(where(*curve->get("conic"), source) + ": curve.conic needs kind = \"conic\"");
    if (curve->get("weierstrass") && job.curve != CurveKind::Elliptic)
      throw ParseError(where(*curve->get("weierstrass"), source) + ": curve.weierstrass needs kind = \"elliptic\"");
  }

  if (const toml::table* b = table_at(root, "boundary", source)) {
    only_keys(*b, "boundary", {"poly", "infinity", "points"}, source);
    if (b->get("poly")) {
      const toml::node& n = *b->get("poly");
      job.poly = coefficient(n, source);
      if (job.poly->is_zero()) throw ParseError(where(n, source) + ": boundary.poly is zero");
      if (job.poly->degree_x() < 1) throw ParseError(where(n, source) + ": boundary.poly must have positive degree in x");
      if (job.poly->degree_t() <= 0 && job.base != BaseKind::Laurent && job.base != BaseKind::GlobalFqt &&
          rational_gcd_degree(*job.poly) > 0)
        throw NotSquarefree(where(n, source) + ": boundary.poly " + job.poly->str() + " is not squarefree");
    }
    if (b->get("infinity")) {
      const toml::node& n = *b->get("infinity");
      if (!n.is_boolean()) throw ParseError(where(n, source) + ": boundary.infinity must be true or false");
      job.infinity = n.value<bool>().value();
    }
    if (b->get("points")) {
      const toml::node& n = *b->get("points");
      if (!n.is_array()) throw ParseError(where(n, source) + ": boundary.points must be an array of strings");
      for (const auto& e : *n.as_array()) {
        if (!e.is_string()) throw ParseError(where(e, source) + ": boundary.points entries must be strings");
        job.points.push_back(e.value<std::string>().value());
      }
      if (job.curve != CurveKind::Elliptic)
        throw ParseError(where(n, source) + ": boundary.points is only used for elliptic curves");
    }
  }

  if (const toml::table* o = table_at(root, "options", source)) {
    only_keys(*o, "options", {"max_depth", "precision"}, source);
    if (o->get("max_depth")) {
      const long v = get_int(*o, "max_depth", "options", source);
      if (v < 0 || v > 1000000) throw ParseError(where(*o->get("max_depth"), source) + ": options.max_depth out of range");
      job.max_depth = static_cast<int>(v);
    }
    if (o->get("precision")) {
      const long v = get_int(*o, "precision", "options", source);
      if (v < 1 || v > 512) throw ParseError(where(*o->get("precision"), source) + ": options.precision must be in 1..512");
      job.precision = v;
    }
  }
  return job;
}

JobSpec parse_job(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_job_text(ss.str(), path);
}

JobSpec JobSpec::localized(const std::string& where) const {
  JobSpec j = *this;
  if (base == BaseKind::GlobalQ) {
    j.base = BaseKind::PAdic;
    j.p = std::stoull(where);
  } else if (base == BaseKind::GlobalFqt) {
    j.base = BaseKind::Laurent;
    j.place = where;
  } else {
    throw std::logic_error("localized needs a global job");
  }
  return j;
}

// ---------------------------------------------------------------- local mode

namespace {

LocalEmbedding embedding(const JobSpec& job) {
  if (job.base == BaseKind::PAdic) return padic_embedding(job.p, job.precision);
  if (job.base == BaseKind::Laurent) return laurent_embedding(job.p, job.place, job.precision);
  throw InputError("a global job needs the global command");
}

NeronReport no_model(const CurveClassification& cls, const Base& F, const std::vector<BoundaryInfo>& boundary) {
  NeronReport R;
  R.verdict = Verdict::NO_MODEL;
  R.curve_class = curve_class_name(cls.cls);
  R.certificate = cls.certificate;
  R.field = F->name();
  R.boundary = boundary;
  return R;
}

std::vector<BoundaryInfo> boundary_infos(const BoundarySet& delta) {
  std::vector<BoundaryInfo> out;
  for (const auto& P : delta.points) {
    BoundaryInfo b;
    b.poly = P.str();
    b.e = P.e;
    b.f = P.f;
    b.status = status_name(P.e == 1 ? Status::RATIONAL_CERT : Status::ACTIVE);
    b.location = "X0";
    out.push_back(b);
  }
  return out;
}

CurvePoint parse_point(const std::string& s, const LocalEmbedding& L) {
  CurvePoint P;
  std::string t = s;
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
  if (t == "O" || t == "o") return P;
  if (!t.empty() && t.front() == '(') {
    if (t.back() != ')' || std::count(t.begin(), t.end(), ',') != 1)
      throw ParseError("point \"" + s + "\" must be O, (x0, y0) or an x-coordinate polynomial");
    const auto comma = t.find(',');
    P.kind = CurvePoint::Kind::Rational;
    P.x = to_elem(parse_expr(t.substr(1, comma - 1)), L);
    P.y = to_elem(parse_expr(t.substr(comma + 1, t.size() - comma - 2)), L);
    return P;
  }
  P.kind = CurvePoint::Kind::XFiber;
  const Expr e = parse_expr(s);
  if (e.degree_x() < 1) throw ParseError("x-coordinate polynomial \"" + s + "\" must have positive degree in x");
  P.xfiber = to_poly(e, L);
  return P;
}

}  // namespace

LocalAnalysis analyze(const JobSpec& job) {
  const LocalEmbedding L = embedding(job);
  const Base& F = L.F;
  RunOptions opt;
  opt.max_depth = job.max_depth;
  LocalAnalysis out;
  out.field = F->name();
  out.place = L.place;

  switch (job.curve) {
    case CurveKind::P1: {
      const Poly f = job.poly ? to_poly(*job.poly, L) : Poly::constant(Elem::one(F));
      if (!job.poly && !job.infinity) {
        out.report = no_model(classify_curve(CurveKind::P1, 0, false, true), F, {});
        break;
      }
      const BoundarySet delta = split_boundary(f, job.infinity);
      const int n = static_cast<int>(delta.points.size());
      const auto cls = classify_curve(CurveKind::P1, n, n == 1 && delta.points[0].degree == 1, true);
      if (cls.cls != CurveClass::GENUS0_OPEN) {
        out.report = no_model(cls, F, boundary_infos(delta));
        break;
      }
      out.report = run(delta, opt);
      out.report.curve_class = curve_class_name(cls.cls);
      break;
    }
    case CurveKind::Conic: {
      const Elem a = to_elem(job.conic[0], L), b = to_elem(job.conic[1], L), c = to_elem(job.conic[2], L);
      if (a.is_exact_zero() || b.is_exact_zero() || c.is_exact_zero())
        throw InputError("conic coefficients must be nonzero");
      if (F->p == 2 && F->kind == FieldKind::Laurent) throw Char2Unsupported("conics over Laurent fields of characteristic 2");
      if (job.infinity) throw UnsupportedInput("boundary.infinity is only supported for P^1");
      const bool has_point = conic_has_rational_point(a, b, c);
      if (!job.poly) {
        out.report = no_model(classify_curve(CurveKind::Conic, 0, false, has_point), F, {});
        break;
      }
      const Poly f = to_poly(*job.poly, L);
      check_squarefree(f);
      out.report = conic_open_model(a, b, c, f, opt);
      const auto& B = out.report.boundary;
      const auto cls = classify_curve(CurveKind::Conic, static_cast<int>(B.size()),
                                      B.size() == 1 && B[0].e * B[0].f == 1, has_point);
      if (cls.cls == CurveClass::NO_MODEL_A1) out.report = no_model(cls, F, B);
      break;
    }
    case CurveKind::Elliptic: {
      WeierstrassCurve E;
      E.F = F;
      for (int i = 0; i < 5; ++i) E.a[i] = to_elem(job.weierstrass[i], L);
      if (job.infinity) throw UnsupportedInput("use the point \"O\" for the origin of an elliptic curve");
      std::vector<CurvePoint> delta;
      for (const auto& s : job.points) delta.push_back(parse_point(s, L));
      if (job.poly) {
        CurvePoint P;
        P.kind = CurvePoint::Kind::XFiber;
        P.xfiber = to_poly(*job.poly, L);
        delta.push_back(P);
      }
      EllipticReport er = open_subset_verdicts(E, delta, opt);
      out.report = std::move(er.report);
      out.kodaira = er.kodaira;
      out.minimal_model = er.minimal.str();
      out.towers = std::move(er.towers);
      break;
    }
  }
  if (out.report.field.empty()) out.report.field = F->name();
  return out;
}

// ---------------------------------------------------------------- global mode

const char* global_verdict_name(GlobalVerdict v) {
  switch (v) {
    case GlobalVerdict::FINITE_TYPE: return "FINITE_TYPE";
    case GlobalVerdict::NOT_FINITE_TYPE: return "NOT_FINITE_TYPE";
    case GlobalVerdict::NO_MODEL: return "NO_MODEL";
    case GlobalVerdict::UNDETERMINED: return "UNDETERMINED";
  }
  return "?";
}

namespace {

// Fraction-free determinant over an integral domain.
template <class T, class Ring>
T bareiss(std::vector<std::vector<T>> M, const Ring& R) {
  const std::size_t n = M.size();
  if (n == 0) return R.one();
  T prev = R.one();
  bool neg = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (R.is_zero(M[k][k])) {
      std::size_t r = k + 1;
      while (r < n && R.is_zero(M[r][k])) ++r;
      if (r == n) return R.zero();
      std::swap(M[k], M[r]);
      neg = !neg;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        M[i][j] = R.div(R.sub(R.mul(M[i][j], M[k][k]), R.mul(M[i][k], M[k][j])), prev);
    prev = M[k][k];
  }
  return neg ? R.neg(M[n - 1][n - 1]) : M[n - 1][n - 1];
}

template <class T, class Ring>
T resultant(const std::vector<T>& f, const std::vector<T>& g, const Ring& R) {
  const int n = static_cast<int>(f.size()) - 1, m = static_cast<int>(g.size()) - 1;
  if (n < 0 || m < 0) return R.zero();
  const int N = n + m;
  std::vector<std::vector<T>> S(N, std::vector<T>(N, R.zero()));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) S[i][i + j] = f[n - j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) S[m + i][i + j] = g[m - j];
  return bareiss(S, R);
}

struct IntRing {
  mpz_class zero() const { return 0; }
  mpz_class one() const { return 1; }
  bool is_zero(const mpz_class& a) const { return a == 0; }
  mpz_class mul(const mpz_class& a, const mpz_class& b) const { return a * b; }
  mpz_class sub(const mpz_class& a, const mpz_class& b) const { return a - b; }
  mpz_class neg(const mpz_class& a) const { return -a; }
  mpz_class div(const mpz_class& a, const mpz_class& b) const { return a / b; }
};

struct TRing {
  const FiniteField& F;
  FPoly zero() const { return {}; }
  FPoly one() const { return fpoly::constant(F, F.one()); }
  bool is_zero(const FPoly& a) const { return a.empty(); }
  FPoly mul(const FPoly& a, const FPoly& b) const { return fpoly::mul(F, a, b); }
  FPoly sub(const FPoly& a, const FPoly& b) const { return fpoly::sub(F, a, b); }
  FPoly neg(const FPoly& a) const { return fpoly::sub(F, {}, a); }
  FPoly div(const FPoly& a, const FPoly& b) const { return fpoly::divrem(F, a, b).first; }
};

std::vector<mpz_class> integer_coeffs(const Expr& f) {
  if (f.degree_t() > 0) throw InputError("t is not defined over Q: " + f.str());
  auto q = rational_coeffs(f);
  mpz_class l = 1;
  for (const auto& c : q) l = lcm(l, mpz_class(c.get_den()));
  std::vector<mpz_class> z;
  for (const auto& c : q) z.push_back(mpz_class(c * l));
  while (z.size() > 1 && z.back() == 0) z.pop_back();
  return z;
}

std::vector<mpz_class> derivative(const std::vector<mpz_class>& f) {
  std::vector<mpz_class> d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<unsigned long>(i));
  if (d.empty()) d.push_back(0);
  return d;
}

mpz_class pollard_brent(const mpz_class& n) {
  if (n % 2 == 0) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class x = 2, y = 2, d = 1;
    auto f = [&](const mpz_class& v) { return mpz_class((v * v + c) % n); };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = gcd(mpz_class(abs(x - y)), n);
    }
    if (d != n) return d;
  }
}

void split_integer(const mpz_class& n, std::set<mpz_class>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) {
    out.insert(n);
    return;
  }
  const mpz_class d = pollard_brent(n);
  split_integer(d, out);
  split_integer(n / d, out);
}

std::set<mpz_class> prime_divisors(mpz_class n) {
  std::set<mpz_class> out;
  n = abs(n);
  if (n == 0) throw std::logic_error("prime divisors of zero");
  for (unsigned long p = 2; p < 10000 && p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.insert(p);
    while (n % p == 0) n /= p;
  }
  split_integer(n, out);
  return out;
}

std::set<mpz_class> primes_of(const mpq_class& q) {
  auto a = q == 0 ? std::set<mpz_class>{} : prime_divisors(q.get_num());
  for (const auto& p : prime_divisors(q.get_den())) a.insert(p);
  return a;
}

// Bad primes of a boundary polynomial over Q: primes of lc * res(f, f').
std::set<mpz_class> bad_primes_Q(const Expr& poly) {
  auto f = integer_coeffs(poly);
  const mpz_class r = resultant(f, derivative(f), IntRing{});
  if (r == 0) throw NotSquarefree("boundary polynomial " + poly.str() + " is not squarefree over Q");
  auto out = prime_divisors(f.back());
  for (const auto& p : prime_divisors(r)) out.insert(p);
  return out;
}

FPoly t_poly(const Expr& c, const FiniteField& Fp) {
  FPoly out(static_cast<std::size_t>(std::max(c.degree_t(), 0)) + 1, Fp.zero());
  const mpz_class m(static_cast<unsigned long>(Fp.p()));
  for (const auto& [k, v] : c.terms) {
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), v.get_den().get_mpz_t(), m.get_mpz_t()) == 0)
      throw InputError("coefficient " + v.get_str() + " has a denominator divisible by the characteristic");
    mpz_class r = mpz_class(v.get_num() * inv) % m;
    if (r < 0) r += m;
    out[k.second] = Fp.add(out[k.second], Fp.from_int(r.get_si()));
  }
  fpoly::trim(Fp, out);
  return out;
}

std::vector<FPoly> tx_coeffs(const Expr& f, const FiniteField& Fp) {
  std::vector<FPoly> out;
  for (int i = 0; i <= f.degree_x(); ++i) out.push_back(t_poly(f.coeff_x(i), Fp));
  while (out.size() > 1 && out.back().empty()) out.pop_back();
  return out;
}

void add_places(const FPoly& a, const FiniteField& Fp, std::set<std::pair<int, std::string>>& out,
                std::vector<FPoly>& polys) {
  if (a.empty()) throw std::logic_error("places of zero");
  for (const auto& [P, mult] : fpoly::factor(Fp, a)) {
    const std::string s = fpoly::to_string(Fp, P, "t");
    if (out.insert({fpoly::degree(P), s}).second) polys.push_back(P);
  }
}

struct Fqt {
  std::set<std::pair<int, std::string>> places;
  std::vector<FPoly> polys;
};

struct BoundaryShape {
  bool inseparable = false;
  std::string certificate;
};

// Bad places of a boundary polynomial over F_p(t).
BoundaryShape bad_places_Fqt(const Expr& poly, const FiniteField& Fp, Fqt& out) {
  auto f = tx_coeffs(poly, Fp);
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 1 || f.back().empty()) throw InputError("boundary polynomial " + poly.str() + " vanishes modulo p");
  std::vector<FPoly> d;
  for (int i = 1; i <= n; ++i) d.push_back(fpoly::scale(Fp, f[i], Fp.from_int(i)));
  while (!d.empty() && d.back().empty()) d.pop_back();
  TRing R{Fp};
  BoundaryShape shape;
  if (!d.empty()) {
    const FPoly r = resultant(f, d, R);
    if (!r.empty()) {
      add_places(f.back(), Fp, out.places, out.polys);
      add_places(r, Fp, out.places, out.polys);
      return shape;
    }
  }
  // a x^(p^k) + b with b/a not a p-th power in F_p(t).
  int k = 0;
  for (long m = n; m > 1 && m % static_cast<long>(Fp.p()) == 0; m /= static_cast<long>(Fp.p())) ++k;
  long pk = 1;
  for (int i = 0; i < k; ++i) pk *= static_cast<long>(Fp.p());
  bool shape_ok = k > 0 && pk == n && !f[0].empty();
  for (int i = 1; i < n && shape_ok; ++i) shape_ok = f[i].empty();
  if (!shape_ok)
    throw UnsupportedInput("boundary polynomial " + poly.str() +
                           " is not squarefree or mixes separable and inseparable factors");
  const FPoly& a = f[n];
  const FPoly& b = f[0];
  const FPoly w = fpoly::sub(Fp, fpoly::mul(Fp, fpoly::derivative(Fp, b), a), fpoly::mul(Fp, fpoly::derivative(Fp, a), b));
  if (w.empty()) throw NotSquarefree("boundary polynomial " + poly.str() + " is a p-th power");
  add_places(fpoly::mul(Fp, a, b), Fp, out.places, out.polys);
  shape.inseparable = true;
  shape.certificate = "Delta_K is cut out by " + poly.str() +
                      ", a purely inseparable point: the ratio of its coefficients has nonzero derivative, so it is not a p-th power (p = " +
                      std::to_string(Fp.p()) + ") and every place ramifies it (e = " + std::to_string(n) + ")";
  return shape;
}

// Simple roots of f modulo small good primes: places where a point of Delta
// specializes into the smooth locus of the closure.
std::vector<std::string> splitting_witnesses(const Expr& poly, const std::set<mpz_class>& bad, int want) {
  auto f = integer_coeffs(poly);
  std::vector<std::string> out;
  for (unsigned long p = 2; p < 2000 && static_cast<int>(out.size()) < want; ++p) {
    if (mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 30) == 0 || bad.count(mpz_class(p))) continue;
    const FiniteField& Fp = *finite_field(p, 1);
    FPoly g;
    for (const auto& c : f) {
      mpz_class r = c % p;
      if (r < 0) r += p;
      g.push_back(Fp.from_int(r.get_si()));
    }
    fpoly::trim(Fp, g);
    auto rts = fpoly::roots(Fp, g);
    if (rts.empty()) continue;
    out.push_back("at " + std::to_string(p) + " the point x = " + Fp.to_string(rts.front().first) +
                  " of the reduction is a simple root of " + poly.str());
  }
  return out;
}

mpq_class expr_value(const Expr& e) { return e.constant_value(); }

// The discriminant of a Weierstrass equation as an expression.
Expr weierstrass_disc(const std::vector<Expr>& a) {
  const Expr& a1 = a[0];
  const Expr& a2 = a[1];
  const Expr& a3 = a[2];
  const Expr& a4 = a[3];
  const Expr& a6 = a[4];
  auto c = [](long v) { return Expr::constant(mpq_class(v)); };
  const Expr b2 = a1 * a1 + c(4) * a2;
  const Expr b4 = a1 * a3 + c(2) * a4;
  const Expr b6 = a3 * a3 + c(4) * a6;
  const Expr b8 = a1 * a1 * a6 + c(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  return -(b2 * b2 * b8) - c(8) * b4 * b4 * b4 - c(27) * b6 * b6 + c(9) * b2 * b4 * b6;
}

std::vector<Expr> xfibers(const JobSpec& job) {
  std::vector<Expr> out;
  if (job.poly) out.push_back(*job.poly);
  for (const auto& s : job.points) {
    std::string t = s;
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
    if (t == "O" || t == "o" || (!t.empty() && t.front() == '(')) continue;
    out.push_back(parse_expr(s));
  }
  return out;
}

bool boundary_empty(const JobSpec& job) { return !job.poly && !job.infinity && job.points.empty(); }

bool is_affine_line(const JobSpec& job) {
  if (job.curve != CurveKind::P1) return false;
  if (!job.poly) return job.infinity;
  return !job.infinity && job.poly->degree_x() == 1;
}

const char* kNeverFiniteType = "then U is never of finite type";

}  // namespace

GlobalReport analyze_global(const JobSpec& job) {
  if (!job.global()) throw InputError("a local job needs the analyze command");
  GlobalReport G;
  const bool overQ = job.base == BaseKind::GlobalQ;
  G.base = overQ ? "Q" : "F_" + std::to_string(job.p) + "(t)";
  const std::string ring = overQ ? "Spec Z" : "Spec F_" + std::to_string(job.p) + "[t]";

  std::vector<std::string> places;
  BoundaryShape shape;
  if (overQ) {
    std::set<mpz_class> bad;
    if (job.poly) bad = bad_primes_Q(*job.poly);
    if (job.curve == CurveKind::Conic) {
      bad.insert(2);
      for (const auto& c : job.conic) {
        if (c.is_zero()) throw InputError("conic coefficients must be nonzero");
        for (const auto& p : primes_of(expr_value(c))) bad.insert(p);
      }
    }
    if (job.curve == CurveKind::Elliptic) {
      bad.insert(2);
      bad.insert(3);
      const mpq_class D = expr_value(weierstrass_disc(job.weierstrass));
      if (D == 0) throw InputError("the Weierstrass equation is singular");
      for (const auto& p : primes_of(D)) bad.insert(p);
      for (const auto& a : job.weierstrass)
        for (const auto& p : primes_of(mpq_class(expr_value(a).get_den()))) bad.insert(p);
      for (const auto& h : xfibers(job))
        for (const auto& p : bad_primes_Q(h)) bad.insert(p);
    }
    for (const auto& p : bad) places.push_back(p.get_str());
    if (job.curve == CurveKind::P1 && job.poly && !is_affine_line(job))
      G.point_certificates = splitting_witnesses(*job.poly, bad, 3);
  } else {
    auto Fq = finite_field(job.p, 1);
    if (make_laurent(job.p)->base_degree != 1) throw UnsupportedInput("global F_q(t) needs q prime");
    const FiniteField& Fp = *Fq;
    Fqt acc;
    if (job.poly && job.curve != CurveKind::Elliptic) shape = bad_places_Fqt(*job.poly, Fp, acc);
    if (job.curve == CurveKind::Conic) {
      if (job.p == 2) throw Char2Unsupported("conics over F_2(t)");
      for (const auto& c : job.conic) {
        const FPoly v = t_poly(c, Fp);
        if (v.empty()) throw InputError("conic coefficients must be nonzero modulo p");
        if (fpoly::degree(v) > 0) add_places(v, Fp, acc.places, acc.polys);
      }
    }
    if (job.curve == CurveKind::Elliptic) {
      const FPoly D = t_poly(weierstrass_disc(job.weierstrass), Fp);
      if (D.empty()) throw InputError("the Weierstrass equation is singular");
      if (fpoly::degree(D) > 0) add_places(D, Fp, acc.places, acc.polys);
      for (const auto& h : xfibers(job)) bad_places_Fqt(h, Fp, acc);
    }
    for (const auto& [deg, s] : acc.places) places.push_back(s);
  }

  for (const auto& pl : places) {
    PlaceEntry e;
    e.place = pl;
    try {
      e.local = analyze(job.localized(pl));
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    G.places.push_back(std::move(e));
  }

  std::ostringstream gm;
  gm << "U0 = closure of U over " << ring;
  if (!places.empty()) {
    gm << " minus the places {";
    for (std::size_t i = 0; i < places.size(); ++i) gm << (i ? ", " : "") << places[i];
    gm << "}";
  }
  gm << "; its special fibers are the closure-complement of Delta";
  G.generic_model = gm.str();

  if (boundary_empty(job)) {
    if (job.curve == CurveKind::Elliptic) {
      G.verdict = GlobalVerdict::FINITE_TYPE;
      G.reason = "E is proper; its Neron model over " + ring + " is of finite type";
    } else {
      G.verdict = GlobalVerdict::NO_MODEL;
      G.reason = classify_curve(job.curve, 0, false, true).certificate;
    }
    return G;
  }
  if (is_affine_line(job)) {
    G.verdict = GlobalVerdict::NO_MODEL;
    G.reason = classify_curve(CurveKind::P1, 1, true, true).certificate;
    return G;
  }
  if (overQ) {
    G.verdict = GlobalVerdict::NOT_FINITE_TYPE;
    G.reason = std::string("characteristic 0 and Delta_K is nonempty: every closed point of Delta_K is separable and "
                           "specializes into the smooth locus at infinitely many places, ") +
               kNeverFiniteType;
    return G;
  }
  if (!shape.inseparable || job.infinity || job.curve == CurveKind::Elliptic) {
    G.verdict = GlobalVerdict::NOT_FINITE_TYPE;
    G.reason = "Delta_K has a separable closed point; it splits at infinitely many places and is not of finite type "
               "for all but finitely many places";
    return G;
  }
  G.point_certificates.push_back(shape.certificate);
  bool all_ft = true, undetermined = false;
  for (const auto& e : G.places) {
    if (!e.local) {
      undetermined = true;
      continue;
    }
    all_ft = all_ft && e.local->report.verdict == Verdict::FINITE_TYPE;
  }
  if (!all_ft) {
    G.verdict = GlobalVerdict::NOT_FINITE_TYPE;
    G.reason = "a bad place has a local model that is not of finite type";
  } else if (undetermined) {
    G.verdict = GlobalVerdict::UNDETERMINED;
    G.reason = "every point of Delta_K is everywhere locally ramified, but some bad place failed";
  } else {
    G.verdict = GlobalVerdict::FINITE_TYPE;
    G.reason = "every point of Delta_K is everywhere locally ramified and every bad place is of finite type";
  }
  return G;
}

// ---------------------------------------------------------------- emit

namespace {

std::string num(long v) { return std::to_string(v); }

ordered_json report_json(const NeronReport& R) {
  ordered_json j;
  j["curve_class"] = R.curve_class;
  j["verdict"] = verdict_name(R.verdict);
  j["certificate"] = R.certificate;
  j["stages"] = num(R.stages);
  j["components"] = ordered_json::array();
  for (const auto& c : R.components) {
    ordered_json k;
    k["id"] = num(c.id);
    k["depth"] = num(c.depth);
    k["tower"] = num(c.tower);
    k["punctures"] = num(c.punctures);
    k["provenance"] = c.provenance;
    k["center"] = c.center;
    k["retained"] = c.retained;
    j["components"].push_back(k);
  }
  j["edges"] = ordered_json::array();
  for (const auto& [a, b] : R.edges) j["edges"].push_back({num(a), num(b)});
  j["edge_notes"] = R.edge_notes;
  j["boundary"] = ordered_json::array();
  for (const auto& b : R.boundary) {
    ordered_json k;
    k["poly"] = b.poly;
    k["e"] = num(b.e);
    k["f"] = num(b.f);
    k["status"] = b.status;
    k["location"] = b.location;
    j["boundary"].push_back(k);
  }
  j["equals_X_minus_Delta"] = R.equals_X_minus_Delta;
  j["truncated"] = R.truncated;
  j["tower"] = num(R.tower);
  j["notes"] = R.notes;
  return j;
}

ordered_json local_json(const LocalAnalysis& a) {
  ordered_json j;
  j["field"] = a.field;
  j["place"] = a.place;
  const ordered_json r = report_json(a.report);
  for (auto it = r.begin(); it != r.end(); ++it) j[it.key()] = it.value();
  if (a.kodaira) {
    ordered_json k;
    k["type"] = a.kodaira->symbol();
    k["m"] = num(a.kodaira->m);
    k["c"] = num(a.kodaira->c);
    k["vdisc"] = num(a.kodaira->vdisc);
    k["split"] = a.kodaira->split;
    k["labels"] = a.kodaira->labels;
    j["kodaira"] = k;
    j["minimal_model"] = a.minimal_model;
    j["towers"] = ordered_json::array();
    for (const auto& t : a.towers) {
      ordered_json w;
      w["location"] = t.location;
      w["chart"] = t.chart;
      w["report"] = report_json(t.report);
      j["towers"].push_back(w);
    }
  }
  return j;
}

ordered_json global_json(const GlobalReport& g) {
  ordered_json j;
  j["mode"] = "global";
  j["base"] = g.base;
  j["verdict"] = global_verdict_name(g.verdict);
  j["reason"] = g.reason;
  j["generic_model"] = g.generic_model;
  j["point_certificates"] = g.point_certificates;
  j["places"] = ordered_json::array();
  for (const auto& e : g.places) {
    ordered_json k;
    k["place"] = e.place;
    if (e.local)
      k["report"] = local_json(*e.local);
    else
      k["error"] = e.error;
    j["places"].push_back(k);
  }
  return j;
}

std::string cluster_id(const std::string& place) {
  std::string s;
  for (char c : place) s += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return s;
}

void text_report(std::ostream& o, const NeronReport& R, const std::string& indent) {
  o << indent << "verdict: " << verdict_name(R.verdict) << " (" << R.curve_class << ")\n";
  o << indent << "certificate: " << R.certificate << "\n";
  o << indent << "stages: " << R.stages << ", components: " << R.components.size() << ", edges: " << R.edges.size()
    << (R.truncated ? ", truncated" : "") << "\n";
  for (const auto& c : R.components)
    o << indent << "  component " << c.id << ": depth " << c.depth << ", tower " << c.tower << ", punctures "
      << c.punctures << ", " << c.provenance << (c.retained ? "" : " (not retained)") << "\n";
  for (const auto& b : R.boundary)
    o << indent << "  boundary " << b.poly << ": e=" << b.e << " f=" << b.f << " " << b.status << " at " << b.location
      << "\n";
  o << indent << "equals X minus Delta: " << (R.equals_X_minus_Delta ? "yes" : "no") << "\n";
  for (const auto& n : R.notes) o << indent << "note: " << n << "\n";
}

}  // namespace

std::string emit_json(const LocalAnalysis& a) { return local_json(a).dump(2) + "\n"; }

std::string emit_json(const GlobalReport& g) { return global_json(g).dump(2) + "\n"; }

std::string emit_dot(const LocalAnalysis& a) { return dot(a.report); }

std::string emit_dot(const GlobalReport& g) {
  std::ostringstream o;
  o << "graph neron {\n";
  for (const auto& e : g.places) {
    if (!e.local) continue;
    const std::string id = cluster_id(e.place);
    o << "  subgraph cluster_" << id << " {\n    label=\"" << e.place << "\";\n";
    o << dot_body(e.local->report, "p" + id + "_", "    ");
    o << "  }\n";
  }
  o << "}\n";
  return o.str();
}

std::string emit_text(const LocalAnalysis& a) {
  std::ostringstream o;
  o << "field: " << a.field << (a.place.empty() ? "" : ", place " + a.place) << "\n";
  if (a.kodaira)
    o << "Kodaira type " << a.kodaira->symbol() << ", m=" << a.kodaira->m << ", c=" << a.kodaira->c
      << ", minimal model " << a.minimal_model << "\n";
  text_report(o, a.report, "");
  for (const auto& t : a.towers) {
    o << "local tower at " << t.location << " (chart " << t.chart << "):\n";
    text_report(o, t.report, "  ");
  }
  return o.str();
}

std::string emit_text(const GlobalReport& g) {
  std::ostringstream o;
  o << "base: " << g.base << "\n";
  o << "global verdict: " << global_verdict_name(g.verdict) << "\n";
  o << "reason: " << g.reason << "\n";
  o << "generic model: " << g.generic_model << "\n";
  for (const auto& c : g.point_certificates) o << "certificate: " << c << "\n";
  for (const auto& e : g.places) {
    o << "place " << e.place << ":\n";
    if (!e.local) {
      o << "  error: " << e.error << "\n";
      continue;
    }
    std::istringstream in(emit_text(*e.local));
    for (std::string line; std::getline(in, line);) o << "  " << line << "\n";
  }
  return o.str();
}

}  // namespace neron
