// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "neron/valfield.hpp"

namespace neron {

// A closed point of P^1_K: a monic irreducible polynomial in x over K, or the
// point at infinity.
struct ClosedPoint {
  bool at_infinity = false;
  Poly poly;  // monic irreducible; empty for the point at infinity
  int degree = 1;
  int e = 1;
  int f = 1;

  bool rational() const { return degree == 1; }
  bool unramified() const { return e == 1; }
  bool in_Ksh() const { return e == 1; }
  std::string str() const;
};

struct BoundarySet {
  Base F;
  std::vector<ClosedPoint> points;
  Poly product;  // the squarefree input polynomial (finite part)
  bool include_infinity = false;
};

// Splits a squarefree polynomial into closed points over its base field.
// Factors come out exact whenever an exact factor exists and can be
// recognized; otherwise they are known modulo pi^N.
BoundarySet split_boundary(const Poly& f, bool include_infinity);

// Factors a monic polynomial with integral coefficients; each factor carries
// its ramification index and residue degree.
struct Factor {
  Poly poly;
  int e = 1;
  int f = 1;
};
std::vector<Factor> factor_monic(const Poly& g);
// Factors a polynomial known to be squarefree (possibly inexact) into monic
// irreducibles over its field, without the squarefree check.
std::vector<Factor> factor_squarefree(const Poly& f);

struct Ramification {
  int e = 1;
  int f = 1;
  bool in_Ksh = true;
};
Ramification classify_ramification(const ClosedPoint& P);

// Squarefreeness over K, including the p-th power shape check in
// characteristic p. Throws NotSquarefree or UnsupportedInput.
void check_squarefree(const Poly& f);

enum class CurveKind { P1, Conic, Elliptic };

enum class CurveClass {
  NO_MODEL_P1,
  NO_MODEL_A1,
  GENUS0_OPEN,
  CONIC_ANISOTROPIC_OPEN,
  ELLIPTIC,
  ELLIPTIC_OPEN,
};

const char* curve_class_name(CurveClass c);

struct CurveClassification {
  CurveClass cls;
  std::string certificate;  // nonexistence reason for the NO_MODEL classes
};

// boundary_points counts closed points of the curve in Delta; rational_points
// counts those of degree 1. `has_rational_point` is only used for conics.
CurveClassification classify_curve(CurveKind kind, int boundary_points, bool single_rational_point,
                                   bool has_rational_point);

// Diagonal conic a X^2 + b Y^2 + c Z^2 over the field of the coefficients.
bool conic_has_rational_point(const Elem& a, const Elem& b, const Elem& c);

// A K-point (X : Y : Z) of the conic, found over the coefficients' field.
// Returns nothing when the conic is anisotropic over that field.
std::optional<std::vector<Elem>> conic_point(const Elem& a, const Elem& b, const Elem& c);

// Exact reconstruction of an inexact element as a quotient of small prime-ring
// elements, if one exists within the known precision.
std::optional<Elem> recognize(const Elem& x);

}  // namespace neron
