// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "neron/elliptic.hpp"
#include "neron/expr.hpp"

namespace neron {

enum class BaseKind { PAdic, Laurent, GlobalQ, GlobalFqt };

struct JobSpec {
  BaseKind base = BaseKind::PAdic;
  std::uint64_t p = 0;  // p for padic, q for laurent and global-Fq(t)
  std::string place = "t";  // laurent: the place of F_q(t) that is completed
  CurveKind curve = CurveKind::P1;
  std::vector<Expr> conic;        // a, b, c
  std::vector<Expr> weierstrass;  // a1, a2, a3, a4, a6
  std::optional<Expr> poly;
  bool infinity = false;
  std::vector<std::string> points;  // elliptic: "O", "(x0, y0)" or an x-coordinate polynomial
  int max_depth = 16;
  long precision = 32;

  bool global() const { return base == BaseKind::GlobalQ || base == BaseKind::GlobalFqt; }
  // The same job over the completion at a place of the global base.
  JobSpec localized(const std::string& place) const;
};

JobSpec parse_job_text(const std::string& text, const std::string& source = "job");
JobSpec parse_job(const std::string& path);

struct LocalAnalysis {
  std::string field;
  std::string place;
  NeronReport report;
  std::optional<KodairaData> kodaira;
  std::string minimal_model;
  std::vector<LocalTower> towers;
};

LocalAnalysis analyze(const JobSpec& job);

struct PlaceEntry {
  std::string place;
  std::optional<LocalAnalysis> local;
  std::string error;
};

enum class GlobalVerdict { FINITE_TYPE, NOT_FINITE_TYPE, NO_MODEL, UNDETERMINED };
const char* global_verdict_name(GlobalVerdict v);

struct GlobalReport {
  std::string base;
  GlobalVerdict verdict = GlobalVerdict::NOT_FINITE_TYPE;
  std::string reason;
  std::string generic_model;
  std::vector<std::string> point_certificates;
  std::vector<PlaceEntry> places;
};

GlobalReport analyze_global(const JobSpec& job);

// Deterministic serializations; all numbers are written as decimal strings.
std::string emit_json(const LocalAnalysis& a);
std::string emit_json(const GlobalReport& g);
std::string emit_dot(const LocalAnalysis& a);
std::string emit_dot(const GlobalReport& g);
std::string emit_text(const LocalAnalysis& a);
std::string emit_text(const GlobalReport& g);

}  // namespace neron
