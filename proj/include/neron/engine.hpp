// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "neron/boundary.hpp"

namespace neron {

enum class Chart { X, W };

// A component of the special fiber. The component at depth m with center c
// carries the coordinate z = (x - c) / pi^m (chart X) or (1/x - c) / pi^m
// (chart W). Its parent edge sits at z = infinity.
struct ModelNode {
  int parent = -1;
  Chart chart = Chart::X;
  Elem center;
  int depth = 0;
  // Residue on the parent where this node was attached; `at_infinity` for the
  // first node of the W chart.
  FiniteField::Elt location;
  bool at_infinity = false;
  std::vector<int> children;
  bool retained = true;
  std::vector<FiniteField::Elt> digits;  // center digits, for ordering
};

enum class Status { ACTIVE, PARKED, RATIONAL_CERT };
const char* status_name(Status s);

// A boundary point after splitting over the current tower level.
struct TrackedPoint {
  int origin = 0;  // index into the base-level boundary set
  bool at_infinity = false;
  Poly xpoly;  // monic over the current level; empty at infinity
  Poly wpoly;  // w^deg xpoly(1/w), or w at infinity
  int degree = 1;
};

struct Mark {
  Status status = Status::ACTIVE;
  int node = 0;
  // ACTIVE: residue on `node` (or the point at infinity of the root).
  FiniteField::Elt residue;
  bool residue_infinity = false;
  // PARKED: the edge between `node` and its child `child`.
  int child = -1;
};

struct BlowupTree {
  Base F;              // current tower level
  BoundarySet delta;   // base-level boundary
  std::vector<TrackedPoint> points;
  std::vector<Mark> marks;  // parallel to points
  std::vector<ModelNode> nodes;  // creation order; node 0 is the root
  int stage = 0;

  int active_count() const;
};

// Raised internally when a specialization is not rational over the tower.
struct NeedExtension {
  int degree;
};

BlowupTree initial_specialize(const BoundarySet& delta, const Base& level);
BlowupTree step(const BlowupTree& T);
BlowupTree dilate(const BlowupTree& T, int node, const FiniteField::Elt& center);
bool equals_X_minus_Delta(const BlowupTree& T);
// Combinatorial check used for semistable starting models: every
// exceptional component carries a boundary specialization in its subtree.
bool sections_meet_every_exceptional_divisor(const BlowupTree& T);

enum class Verdict { FINITE_TYPE, LFT_NOT_FINITE_TYPE, TRUNCATED, NO_MODEL };
const char* verdict_name(Verdict v);

struct ComponentInfo {
  int id = 0;
  int depth = 0;
  int tower = 1;
  int punctures = 0;
  std::string provenance;
  bool retained = true;
  std::string center;
};

struct BoundaryInfo {
  std::string poly;
  int e = 1;
  int f = 1;
  std::string status;
  std::string location;
};

struct NeronReport {
  Verdict verdict = Verdict::FINITE_TYPE;
  std::string curve_class;
  std::string certificate;
  int stages = 0;
  std::vector<ComponentInfo> components;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::string> edge_notes;  // parallel to edges
  std::vector<BoundaryInfo> boundary;
  bool equals_X_minus_Delta = false;
  bool truncated = false;
  int tower = 1;
  std::string field;
  std::vector<std::string> notes;
};

struct RunOptions {
  int max_depth = 16;
  int safety_depth = 4096;
};

// Whole construction with tower extension and precision escalation by replay.
NeronReport run(const BoundarySet& delta, const RunOptions& opt = {});
// The final tree of the last run, for callers needing structure beyond the report.
BlowupTree run_tree(const BoundarySet& delta, const RunOptions& opt, Verdict* verdict = nullptr);
NeronReport summarize(const BlowupTree& T, Verdict v, bool truncated);

// Canonical encoding of the tree shape with mark counts, invariant under
// relabeling and used for base-change comparisons.
std::string canonical_shape(const BlowupTree& T);

// Diagonal conic a X^2 + b Y^2 + c Z^2 = 0 minus the points with X/Z a root
// of `xfiber`.
NeronReport conic_open_model(const Elem& a, const Elem& b, const Elem& c, const Poly& xfiber,
                             const RunOptions& opt = {});

std::string dot(const NeronReport& R);
// Node and edge statements only, with node names prefixed.
std::string dot_body(const NeronReport& R, const std::string& prefix, const std::string& indent);

}  // namespace neron
