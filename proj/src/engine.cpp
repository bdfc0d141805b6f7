// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#include "neron/engine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace neron {

const char* status_name(Status s) {
  switch (s) {
    case Status::ACTIVE: return "ACTIVE";
    case Status::PARKED: return "PARKED";
    case Status::RATIONAL_CERT: return "RATIONAL_CERT";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::FINITE_TYPE: return "FINITE_TYPE";
    case Verdict::LFT_NOT_FINITE_TYPE: return "LFT_NOT_FINITE_TYPE";
    case Verdict::TRUNCATED: return "TRUNCATED";
    case Verdict::NO_MODEL: return "NO_MODEL";
  }
  return "?";
}

int BlowupTree::active_count() const {
  int n = 0;
  for (const Mark& m : marks) n += m.status != Status::PARKED;
  return n;
}

namespace {

struct Location {
  bool inside = false;
  FiniteField::Elt residue;
};

// Where the roots of P sit relative to the disc of node N.
Location locate(const BlowupTree& T, const TrackedPoint& P, const ModelNode& N) {
  const Poly& f = N.chart == Chart::X ? P.xpoly : P.wpoly;
  const FiniteField& R = *T.F->residue;
  if (f.degree() < 1) return {};
  Poly psi = f.shift_scale(N.center, Elem::pi_power(T.F, N.depth));
  NewtonPolygon np = newton_polygon(psi);
  if (np.zero_roots > 0) {
    if (!np.segments.empty()) throw std::logic_error("tracked point is reducible: " + f.str());
    return {true, R.zero()};
  }
  if (np.segments.size() != 1) throw std::logic_error("tracked point is reducible: " + f.str());
  const Rational slope = np.segments[0].slope;
  if (Rational(0) < slope) return {};
  if (slope < Rational(0)) return {true, R.zero()};
  FPoly r = residual_polynomial(psi, Rational(0));
  auto fac = fpoly::factor(R, r);
  if (fac.size() != 1) throw std::logic_error("tracked point is reducible: " + f.str());
  const int d = fpoly::degree(fac[0].first);
  if (d > 1) throw NeedExtension{T.F->relative_degree() * d};
  return {true, R.neg(fac[0].first[0])};
}

int find_child(const BlowupTree& T, int node, const FiniteField::Elt& r, bool at_inf) {
  for (int c : T.nodes[node].children) {
    const ModelNode& C = T.nodes[c];
    if (C.at_infinity != at_inf) continue;
    if (at_inf || C.location == r) return c;
  }
  return -1;
}

Mark specialize(const BlowupTree& T, const TrackedPoint& P) {
  Location L = locate(T, P, T.nodes[0]);
  int node = 0;
  bool inf = !L.inside;
  FiniteField::Elt r = inf ? T.F->residue->zero() : L.residue;
  for (;;) {
    const int c = find_child(T, node, r, inf);
    if (c < 0) {
      Mark m;
      m.status = P.degree == 1 ? Status::RATIONAL_CERT : Status::ACTIVE;
      m.node = node;
      m.residue = r;
      m.residue_infinity = inf;
      return m;
    }
    Location L2 = locate(T, P, T.nodes[c]);
    if (!L2.inside) {
      Mark m;
      m.status = Status::PARKED;
      m.node = node;
      m.child = c;
      return m;
    }
    node = c;
    r = L2.residue;
    inf = false;
  }
}

void respecialize(BlowupTree& T) {
  T.marks.clear();
  for (const TrackedPoint& P : T.points) T.marks.push_back(specialize(T, P));
}

int add_child(BlowupTree& T, int node, const FiniteField::Elt& r, bool at_inf) {
  const ModelNode& N = T.nodes[node];
  ModelNode C;
  C.parent = node;
  C.depth = N.depth + 1;
  C.location = r;
  C.at_infinity = at_inf;
  if (at_inf) {
    C.chart = Chart::W;
    C.center = Elem::zero(T.F);
  } else {
    C.chart = N.chart;
    C.center = N.center + Elem::lift(T.F, r) * Elem::pi_power(T.F, N.depth);
    C.digits = N.digits;
    C.digits.push_back(r);
  }
  T.nodes.push_back(C);
  const int id = static_cast<int>(T.nodes.size()) - 1;
  T.nodes[node].children.push_back(id);
  T.stage = std::max(T.stage, C.depth);
  return id;
}

TrackedPoint tracked(int origin, const Poly& x) {
  TrackedPoint P;
  P.origin = origin;
  P.xpoly = x;
  P.wpoly = x.reversed();
  P.degree = x.degree();
  return P;
}

bool node_less(const BlowupTree& T, int a, int b) {
  const ModelNode& A = T.nodes[a];
  const ModelNode& B = T.nodes[b];
  if (A.depth != B.depth) return A.depth < B.depth;
  if (A.chart != B.chart) return A.chart == Chart::X;
  for (size_t i = 0; i < std::min(A.digits.size(), B.digits.size()); ++i) {
    const int c = FiniteField::compare(A.digits[i], B.digits[i]);
    if (c != 0) return c < 0;
  }
  return A.digits.size() < B.digits.size();
}

int node_tower(const BlowupTree& T, const ModelNode& N) {
  const int k = T.F->base_degree;
  int l = k;
  for (const auto& d : N.digits) l = std::lcm(l, T.F->residue->element_degree(d));
  return l / k;
}

std::string residue_str(const BlowupTree& T, const FiniteField::Elt& r) { return T.F->residue->to_string(r); }

bool has_certificate(const BoundarySet& d) {
  for (const ClosedPoint& P : d.points)
    if (P.e == 1) return true;
  return false;
}

}  // namespace

BlowupTree initial_specialize(const BoundarySet& delta, const Base& level) {
  BlowupTree T;
  T.F = level;
  T.delta = delta;
  ModelNode root;
  root.center = Elem::zero(level);
  T.nodes.push_back(root);
  const bool same = same_field(level, delta.F);
  for (size_t i = 0; i < delta.points.size(); ++i) {
    const ClosedPoint& P = delta.points[i];
    const int origin = static_cast<int>(i);
    if (P.at_infinity) {
      TrackedPoint Q;
      Q.origin = origin;
      Q.at_infinity = true;
      Q.wpoly = Poly::x(level);
      Q.degree = 1;
      T.points.push_back(Q);
      continue;
    }
    Poly x = P.poly.reembed(level);
    if (same || P.f == 1) {
      T.points.push_back(tracked(origin, x));
      continue;
    }
    for (const Factor& fac : factor_squarefree(x)) T.points.push_back(tracked(origin, fac.poly));
  }
  respecialize(T);
  return T;
}

BlowupTree step(const BlowupTree& T) {
  BlowupTree U = T;
  std::vector<std::pair<int, int>> todo;  // (node, mark index)
  for (size_t i = 0; i < T.marks.size(); ++i) {
    const Mark& m = T.marks[i];
    if (m.status == Status::PARKED) continue;
    bool seen = false;
    for (auto& [n, j] : todo) {
      const Mark& o = T.marks[j];
      if (n == m.node && o.residue_infinity == m.residue_infinity &&
          (m.residue_infinity || o.residue == m.residue))
        seen = true;
    }
    if (!seen) todo.push_back({m.node, static_cast<int>(i)});
  }
  for (auto& [n, j] : todo) add_child(U, n, T.marks[j].residue, T.marks[j].residue_infinity);
  respecialize(U);
  return U;
}

BlowupTree dilate(const BlowupTree& T, int node, const FiniteField::Elt& center) {
  if (node < 0 || node >= static_cast<int>(T.nodes.size())) throw std::out_of_range("no such component");
  if (find_child(T, node, center, false) >= 0)
    throw CenterNotSmooth("dilatation center is an intersection point with a child component");
  BlowupTree U = T;
  add_child(U, node, center, false);
  U.nodes[node].retained = false;
  respecialize(U);
  return U;
}

bool equals_X_minus_Delta(const BlowupTree& T) { return T.active_count() == 0; }

bool sections_meet_every_exceptional_divisor(const BlowupTree& T) {
  std::vector<bool> hit(T.nodes.size(), false);
  for (const Mark& m : T.marks) {
    int n = m.status == Status::PARKED ? m.child : m.node;
    for (; n >= 0; n = T.nodes[n].parent) hit[n] = true;
  }
  for (size_t i = 1; i < T.nodes.size(); ++i)
    if (!hit[i]) return false;
  return true;
}

BlowupTree run_tree(const BoundarySet& delta, const RunOptions& opt, Verdict* verdict) {
  BoundarySet d = delta;
  Base level = delta.F;
  for (;;) {
    try {
      BlowupTree T = initial_specialize(d, level);
      const bool cert = has_certificate(d);
      Verdict v;
      for (;;) {
        if (T.active_count() == 0) {
          v = Verdict::FINITE_TYPE;
          break;
        }
        if (cert && T.stage >= opt.max_depth) {
          v = Verdict::LFT_NOT_FINITE_TYPE;
          break;
        }
        if (T.stage >= opt.safety_depth) {
          v = Verdict::TRUNCATED;
          break;
        }
        T = step(T);
      }
      if (verdict) *verdict = v;
      return T;
    } catch (const NeedExtension& ne) {
      level = extend_unramified(level, ne.degree);
    } catch (const PrecisionExhausted&) {
      if (!d.product.is_exact()) throw;
      level = escalate_precision(level);
      d = split_boundary(d.product.reembed(with_precision(d.F, level->precision)), d.include_infinity);
    }
  }
}

NeronReport summarize(const BlowupTree& T, Verdict v, bool truncated) {
  NeronReport R;
  R.verdict = v;
  R.truncated = truncated;
  R.stages = T.stage;
  R.tower = T.F->relative_degree();
  R.field = T.F->name();

  std::vector<int> order(T.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return node_less(T, a, b); });
  std::vector<int> id(T.nodes.size());
  for (size_t i = 0; i < order.size(); ++i) id[order[i]] = static_cast<int>(i);

  std::vector<std::set<std::string>> active_locs(T.nodes.size());
  for (const Mark& m : T.marks)
    if (m.status != Status::PARKED)
      active_locs[m.node].insert(m.residue_infinity ? "inf" : residue_str(T, m.residue));

  for (int n : order) {
    const ModelNode& N = T.nodes[n];
    ComponentInfo c;
    c.id = id[n];
    c.depth = N.depth;
    c.tower = node_tower(T, N);
    c.retained = N.retained;
    const int edges = static_cast<int>(N.children.size()) + (N.parent >= 0 ? 1 : 0);
    c.punctures = edges + static_cast<int>(active_locs[n].size());
    int a = n;
    while (a >= 0 && T.nodes[a].depth > 1) a = T.nodes[a].parent;
    if (N.depth == 0)
      c.provenance = "X0";
    else if (T.nodes[a].at_infinity)
      c.provenance = "X0:x=inf";
    else
      c.provenance = "X0:x=" + residue_str(T, T.nodes[a].location);
    c.center = (N.chart == Chart::X ? "x=" : "1/x=") + N.center.str();
    R.components.push_back(c);
  }

  std::map<std::pair<int, int>, std::set<std::string>> parked;
  for (size_t i = 0; i < T.marks.size(); ++i) {
    const Mark& m = T.marks[i];
    if (m.status != Status::PARKED) continue;
    const TrackedPoint& P = T.points[i];
    parked[{id[m.node], id[m.child]}].insert(P.at_infinity ? "inf" : P.xpoly.str());
  }
  for (size_t n = 1; n < T.nodes.size(); ++n) R.edges.push_back({id[T.nodes[n].parent], id[n]});
  std::sort(R.edges.begin(), R.edges.end());
  for (const auto& e : R.edges) {
    std::string note;
    for (const auto& s : parked[e]) note += (note.empty() ? "" : ", ") + s;
    R.edge_notes.push_back(note);
  }

  for (size_t i = 0; i < T.delta.points.size(); ++i) {
    const ClosedPoint& P = T.delta.points[i];
    BoundaryInfo b;
    b.poly = P.at_infinity ? "inf" : P.poly.str();
    b.e = P.e;
    b.f = P.f;
    bool all_parked = true, cert = false;
    std::set<std::string> locs;
    for (size_t j = 0; j < T.points.size(); ++j) {
      if (T.points[j].origin != static_cast<int>(i)) continue;
      const Mark& m = T.marks[j];
      all_parked = all_parked && m.status == Status::PARKED;
      cert = cert || m.status == Status::RATIONAL_CERT;
      if (m.status == Status::PARKED)
        locs.insert("edge " + std::to_string(id[m.node]) + "-" + std::to_string(id[m.child]));
      else
        locs.insert("component " + std::to_string(id[m.node]) + " at " +
                    (m.residue_infinity ? std::string("inf") : residue_str(T, m.residue)));
    }
    // An unramified point stays certified even where its conjugates were not
    // yet split over the tower.
    if (P.e == 1) cert = true;
    b.status = status_name(all_parked ? Status::PARKED : cert ? Status::RATIONAL_CERT : Status::ACTIVE);
    for (const auto& s : locs) b.location += (b.location.empty() ? "" : "; ") + s;
    R.boundary.push_back(b);
  }

  for (const ClosedPoint& P : T.delta.points) {
    if (P.e != 1) continue;
    if (P.at_infinity)
      R.certificate = "rational point at infinity lies in Delta";
    else if (P.degree == 1)
      R.certificate = "rational point " + P.poly.str() + " = 0 lies in Delta";
    else
      R.certificate = "point " + P.poly.str() + " = 0 (e=1, f=" + std::to_string(P.f) + ") lies in Delta(K^sh)";
    break;
  }
  if (R.certificate.empty() && v == Verdict::FINITE_TYPE)
    R.certificate = "every point of Delta is ramified";
  return R;
}

NeronReport run(const BoundarySet& delta, const RunOptions& opt) {
  Verdict v = Verdict::FINITE_TYPE;
  BlowupTree T = run_tree(delta, opt, &v);
  NeronReport R = summarize(T, v, v != Verdict::FINITE_TYPE);
  R.equals_X_minus_Delta = equals_X_minus_Delta(T);
  if (T.F->relative_degree() > delta.F->relative_degree())
    R.notes.push_back("residue locations made rational over " + T.F->name());
  return R;
}

namespace {

std::string shape_of(const BlowupTree& T, int n, const std::vector<int>& act, const std::vector<int>& cert,
                     const std::vector<int>& locs, const std::map<int, int>& parked) {
  std::vector<std::string> kids;
  for (int c : T.nodes[n].children) {
    auto it = parked.find(c);
    kids.push_back("p" + std::to_string(it == parked.end() ? 0 : it->second) + shape_of(T, c, act, cert, locs, parked));
  }
  std::sort(kids.begin(), kids.end());
  std::string s = "(" + std::to_string(locs[n]) + "," + std::to_string(act[n]) + "," + std::to_string(cert[n]);
  for (const auto& k : kids) s += k;
  return s + ")";
}

}  // namespace

std::string canonical_shape(const BlowupTree& T) {
  const size_t n = T.nodes.size();
  std::vector<int> act(n, 0), cert(n, 0), locs(n, 0);
  std::map<int, int> parked;
  std::vector<std::set<std::string>> distinct(n);
  for (size_t i = 0; i < T.marks.size(); ++i) {
    const Mark& m = T.marks[i];
    const int deg = T.points[i].degree;
    if (m.status == Status::PARKED) {
      parked[m.child] += deg;
      continue;
    }
    (m.status == Status::RATIONAL_CERT ? cert : act)[m.node] += deg;
    distinct[m.node].insert(m.residue_infinity ? "inf" : residue_str(T, m.residue));
  }
  for (size_t i = 0; i < n; ++i) locs[i] = static_cast<int>(distinct[i].size());
  return shape_of(T, 0, act, cert, locs, parked);
}

NeronReport conic_open_model(const Elem& a, const Elem& b, const Elem& c, const Poly& xfiber,
                             const RunOptions& opt) {
  const Base F = a.field();
  const bool split = conic_has_rational_point(a, b, c);
  const Base G = split ? F : extend_unramified(F, 2);
  const std::vector<Elem> A = {a.reembed(G), b.reembed(G), c.reembed(G)};
  auto found = conic_point(A[0], A[1], A[2]);
  if (!found) throw std::logic_error("conic has no point over the splitting field");
  std::vector<Elem> P0 = *found;
  std::vector<Elem> exact;
  for (const Elem& e : P0) {
    auto r = e.is_exact() ? std::optional<Elem>(e) : recognize(e);
    if (r) exact.push_back(*r);
  }
  if (exact.size() == 3 &&
      (A[0] * exact[0] * exact[0] + A[1] * exact[1] * exact[1] + A[2] * exact[2] * exact[2]).is_exact_zero())
    P0 = exact;

  int skip = 2;
  while (!P0[skip].certainly_nonzero()) --skip;
  int i = (skip == 0) ? 1 : 0;
  int j = (skip == 2) ? 1 : 2;

  // D(t) = e_i + t e_j; point(t) = Q(D) P0 - 2 B(P0, D) D, quadratic in t.
  const Poly QD(G, {A[i], Elem::zero(G), A[j]});
  const Poly B(G, {A[i] * P0[i], A[j] * P0[j]});
  const Elem two = Elem::from_long(G, 2);
  std::vector<Poly> pt(3);
  for (int k = 0; k < 3; ++k) {
    pt[k] = QD.scale(P0[k]);
    if (k == i) pt[k] = pt[k] - B.scale(two);
    if (k == j) pt[k] = pt[k] - (B * Poly::x(G)).scale(two);
  }
  const Poly h = xfiber.reembed(G);
  const int d = h.degree();
  Poly H(G);
  for (int k = 0; k <= d; ++k) {
    if (h.c[k].is_exact_zero()) continue;
    Poly term = pow_poly(pt[0], k) * pow_poly(pt[2], d - k);
    H = H + term.scale(h.c[k]);
  }
  H.trim();
  const bool inf = H.degree() < 2 * d;
  Poly dH = H.derivative();
  if (H.is_exact() && !dH.is_zero()) {
    Poly g = gcd_exact(H, dH);
    if (g.degree() > 0) H = H.divrem(g).first;
  }
  BoundarySet delta = split_boundary(H, inf);
  NeronReport R = run(delta, opt);
  R.curve_class = curve_class_name(split ? CurveClass::GENUS0_OPEN : CurveClass::CONIC_ANISOTROPIC_OPEN);
  std::ostringstream note;
  note << "parametrized through (" << P0[0].str() << " : " << P0[1].str() << " : " << P0[2].str() << ")";
  R.notes.insert(R.notes.begin(), note.str());
  if (!split) R.notes.insert(R.notes.begin(), "conic is anisotropic; computed over " + G->name());
  return R;
}

std::string dot_body(const NeronReport& R, const std::string& prefix, const std::string& indent) {
  std::ostringstream o;
  for (const ComponentInfo& c : R.components) {
    o << indent << prefix << "n" << c.id << " [label=\"" << c.id << "\\ndepth " << c.depth << "\\ntower " << c.tower
      << "\\npunctures " << c.punctures << "\"";
    if (!c.retained) o << ", style=dashed";
    o << "];\n";
  }
  for (size_t k = 0; k < R.edges.size(); ++k) {
    o << indent << prefix << "n" << R.edges[k].first << " -- " << prefix << "n" << R.edges[k].second;
    if (k < R.edge_notes.size() && !R.edge_notes[k].empty()) o << " [label=\"" << R.edge_notes[k] << "\"]";
    o << ";\n";
  }
  return o.str();
}

std::string dot(const NeronReport& R) { return "graph neron {\n" + dot_body(R, "", "  ") + "}\n"; }

}  // namespace neron
