// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("neron_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_job(const std::string& name, const std::string& text) {
  const fs::path p = workdir() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int neron(const std::string& args) {
  const std::string cmd = std::string(NERON_CLI) + " " + args + " > " + (workdir() / "stdout").string() + " 2> " +
                          (workdir() / "stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kRamified = "[base]\nkind = \"padic\"\np = 5\n[boundary]\npoly = \"x^2 - 5\"\n";

}  // namespace

TEST_CASE("exit codes") {
  CHECK(neron("analyze " + write_job("r.toml", kRamified).string()) == 0);
  CHECK(neron("analyze " + write_job("a1.toml", "[base]\nkind = \"padic\"\np = 5\n[boundary]\npoly = \"x\"\n").string()) ==
        0);
  CHECK(slurp(workdir() / "stdout").find("NO_MODEL_A1") != std::string::npos);
  CHECK(neron("analyze " + write_job("p1.toml", "[base]\nkind = \"padic\"\np = 5\n").string()) == 0);
  CHECK(neron("global " + write_job("g.toml", "[base]\nkind = \"global-Q\"\n[boundary]\npoly = \"x^2 - 5\"\n").string()) ==
        0);
  CHECK(slurp(workdir() / "stdout").find("then U is never of finite type") != std::string::npos);

  CHECK(neron("analyze " + write_job("sq.toml", "[base]\nkind = \"padic\"\np = 5\n[boundary]\npoly = \"x^2\"\n").string()) ==
        2);
  CHECK(slurp(workdir() / "stderr").find("not squarefree") != std::string::npos);
  CHECK(neron("analyze " + write_job("bad.toml", "[base]\nkind = \"padic\"\np = 5\nfoo = 2\n").string()) == 2);
  CHECK(neron("analyze " + (workdir() / "missing.toml").string()) == 2);
  CHECK(neron("") == 2);
  CHECK(neron("analyze " + (workdir() / "g.toml").string()) == 2);
  CHECK(neron("global " + (workdir() / "r.toml").string()) == 2);

  // An unramified point of degree 25 needs a residue field beyond the tower cap.
  CHECK(neron("analyze " +
              write_job("tower.toml", "[base]\nkind = \"padic\"\np = 2\n[boundary]\npoly = \"x^25 + x^3 + 1\"\n").string()) ==
        3);
}

TEST_CASE("options and output files") {
  const fs::path job = write_job("gm.toml", "[base]\nkind = \"padic\"\np = 5\n[boundary]\npoly = \"x\"\ninfinity = true\n");
  const fs::path j1 = workdir() / "a.json", j2 = workdir() / "b.json", d1 = workdir() / "a.dot", d2 = workdir() / "b.dot";
  REQUIRE(neron("analyze " + job.string() + " --max-depth 3 --json " + j1.string() + " --dot " + d1.string()) == 0);
  REQUIRE(neron("analyze " + job.string() + " --max-depth 3 --precision 64 --json " + j2.string() + " --dot " +
                d2.string()) == 0);
  CHECK(slurp(j1) == slurp(j2));
  CHECK(slurp(d1) == slurp(d2));
  CHECK(slurp(j1).find("\"stages\": \"3\"") != std::string::npos);
  const std::string dot = slurp(d1);
  CHECK(dot.rfind("graph neron {", 0) == 0);
  CHECK(dot.find("n6 [") != std::string::npos);
  CHECK(dot.find("n7 [") == std::string::npos);
  CHECK(neron("analyze " + job.string() + " --max-depth -1") == 2);
  CHECK(neron("analyze " + job.string() + " --json " + (workdir() / "no" / "such" / "dir.json").string()) == 2);
}
