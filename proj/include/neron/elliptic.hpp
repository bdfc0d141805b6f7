// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "neron/engine.hpp"

namespace neron {

// y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6
struct WeierstrassCurve {
  Base F;
  std::array<Elem, 5> a;  // a1, a2, a3, a4, a6
  bool minimal = false;

  static WeierstrassCurve from_longs(const Base& F, const std::array<long, 5>& c);
  // y^2 + (a1 x + a3) y - (x^3 + a2 x^2 + a4 x + a6), evaluated at a point.
  Elem equation(const Elem& x, const Elem& y) const;
  std::string str() const;
};

struct WeierstrassQuantities {
  Elem b2, b4, b6, b8, c4, c6, disc;
};
WeierstrassQuantities quantities(const WeierstrassCurve& E);

// x = u^2 x' + r, y = u^3 y' + u^2 s x' + t
struct Isomorphism {
  Elem u, r, s, t;
  static Isomorphism identity(const Base& F);
};
WeierstrassCurve transform(const WeierstrassCurve& E, const Isomorphism& T);
// Applying `first` and then `second` equals applying the result.
Isomorphism compose(const Isomorphism& first, const Isomorphism& second);

enum class KodairaType { I0, In, II, III, IV, I0s, Ins, IVs, IIIs, IIs };

struct KodairaData {
  KodairaType type = KodairaType::I0;
  int n = 0;  // for I_n and I_n*
  int m = 1;  // components of the special fiber
  int c = 1;  // order of the component group
  long vdisc = 0;
  bool split = false;  // I_n: tangents rational over the residue field
  std::vector<std::string> labels;
  std::string symbol() const;
};

struct TateResult {
  KodairaData kodaira;
  WeierstrassCurve model;  // minimal; the singular point of a bad fiber sits at (0, 0)
  Isomorphism iso;         // from the input coordinates to `model`
};

TateResult tate_full(const WeierstrassCurve& E);
WeierstrassCurve minimal_model(const WeierstrassCurve& E);
KodairaData tate(const WeierstrassCurve& E);

// A boundary point on E: the origin, a K-rational point, or all points over
// the roots of an x-coordinate polynomial of degree at most 2.
struct CurvePoint {
  enum class Kind { Origin, Rational, XFiber };
  Kind kind = Kind::Origin;
  Elem x, y;
  Poly xfiber;
  std::string str() const;
};

struct PointSpecialization {
  std::string component;  // label in the Kodaira chain; "0" is the identity component
  std::string residue;    // residue point on the minimal Weierstrass fiber
  bool weierstrass_smooth = true;  // lands on a nonsingular point of the Weierstrass fiber
  bool neron_smooth = true;        // lands in the smooth locus of the Neron model
};
PointSpecialization specialize_point(const TateResult& T, const CurvePoint& P);

// Closed points of E making up one CurvePoint.
struct EllipticClosedPoint {
  int source = 0;
  Poly xpoly;      // minimal polynomial of x over K; empty at the origin
  Poly generator;  // minimal polynomial of a generator of the residue field
  int degree = 1;
  int e = 1;
  int f = 1;
  std::string label;
  std::string str() const { return label; }
};
std::vector<EllipticClosedPoint> closed_points(const WeierstrassCurve& E, const std::vector<CurvePoint>& delta);

struct LocalTower {
  std::string location;
  std::string chart;
  NeronReport report;
};

struct EllipticReport {
  NeronReport report;
  KodairaData kodaira;
  WeierstrassCurve minimal;
  std::vector<LocalTower> towers;
};

EllipticReport open_subset_verdicts(const WeierstrassCurve& E, const std::vector<CurvePoint>& delta,
                                    const RunOptions& opt = {});

}  // namespace neron
