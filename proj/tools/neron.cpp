// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "neron/report.hpp"

namespace {

struct Options {
  std::string job;
  std::optional<int> max_depth;
  std::optional<long> precision;
  std::string json;
  std::string dot;
};

void add_options(CLI::App* cmd, Options& o) {
  cmd->add_option("job", o.job, "job file (TOML)")->required();
  cmd->add_option("--max-depth", o.max_depth, "stage at which an unfinished tower is reported")->check(CLI::NonNegativeNumber);
  cmd->add_option("--precision", o.precision, "initial p-adic precision")->check(CLI::Range(1, 512));
  cmd->add_option("--json", o.json, "write the JSON report here");
  cmd->add_option("--dot", o.dot, "write the dual graph (DOT) here");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw neron::InputError("cannot write " + path);
}

template <class Report>
void emit(const Report& r, const Options& o) {
  std::cout << neron::emit_text(r);
  if (!o.json.empty()) write_file(o.json, neron::emit_json(r));
  if (!o.dot.empty()) write_file(o.dot, neron::emit_dot(r));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neron lft-models of open curves over discretely valued fields"};
  app.require_subcommand(1);
  Options opt;
  CLI::App* analyze = app.add_subcommand("analyze", "local analysis over a complete discretely valued field");
  CLI::App* global = app.add_subcommand("global", "global analysis over Q or F_q(t)");
  add_options(analyze, opt);
  add_options(global, opt);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    neron::JobSpec job = neron::parse_job(opt.job);
    if (opt.max_depth) job.max_depth = *opt.max_depth;
    if (opt.precision) job.precision = *opt.precision;
    if (analyze->parsed())
      emit(neron::analyze(job), opt);
    else
      emit(neron::analyze_global(job), opt);
  } catch (const neron::InputError& e) {
    std::cerr << "neron: input error: " << e.what() << "\n";
    return 2;
  } catch (const neron::PrecisionExhausted& e) {
    std::cerr << "neron: precision exhausted: " << e.what() << "\n";
    return 3;
  } catch (const neron::PrecisionCapReached& e) {
    std::cerr << "neron: precision cap reached: " << e.what() << "\n";
    return 3;
  } catch (const neron::TowerTooLarge& e) {
    std::cerr << "neron: tower too large: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
