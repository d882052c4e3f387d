// Copyright 2026 The coexist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <array>
#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <fstream>
#include <string>

#include "coexist/cli.hpp"

using namespace coexist;

namespace {

const std::string kData = COEXIST_TEST_DATA;

struct Run {
  int exit_code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(COEXIST_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string strip_timing(const std::string& s) {
  std::string out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find('\n', pos);
    if (end == std::string::npos) end = s.size();
    const std::string line = s.substr(pos, end - pos);
    if (line.find("\"timing_ms\"") == std::string::npos) out += line + "\n";
    pos = end + 1;
  }
  return out;
}

Command cmd(std::string name, std::vector<std::string> args) {
  Command c;
  c.name = std::move(name);
  c.args = std::move(args);
  return c;
}

}  // namespace

TEST_CASE("workspace loading") {
  const Workspace ws = load_workspace(kData + "/qubit.json");
  CHECK(ws.dim == 2);
  CHECK(ws.observables.count("Sz") == 1);
  CHECK(ws.instruments.count("Damp3") == 1);
  CHECK(ws.schemes.count("Cnot") == 1);
  CHECK(ws.vectors.count("up") == 1);

  // The three-Kraus instrument: Kraus sums reproduce its effects.
  const Instrument& damp = ws.instrument("Damp3");
  CHECK(damp.outcomes() == 2);
  CHECK(damp.kraus(0).size() == 2);
  CMatrix total = CMatrix::Zero(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (const CMatrix& k : damp.kraus(i)) total += k.adjoint() * k;
  CHECK((total - CMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("a single valid observable loads as one observable") {
  const Json j = Json::parse(R"({"dim": 2, "observables": {"Z": {"dim": 2, "effects": [
      [[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]]]}}})");
  const Workspace ws = parse_workspace(j);
  CHECK(ws.observables.size() == 1);
  CHECK(ws.instruments.empty());
}

TEST_CASE("workspace errors") {
  try {
    load_workspace(kData + "/bad_normalization.json");
    FAIL("expected ValidationError");
  } catch (const CoexistError& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
    CHECK(std::string(e.what()).find("normalization") != std::string::npos);
  }
  CHECK_THROWS_AS(load_workspace(kData + "/malformed.json"), CoexistError);
  CHECK_THROWS_AS(load_workspace(kData + "/does_not_exist.json"), CoexistError);
  const Json mismatch = Json::parse(R"({"dim": 3, "observables": {"T": {"dim": 2, "effects": [
      [[[1,0],[0,0]],[[0,0],[1,0]]]]}}})");
  CHECK_THROWS_AS(parse_workspace(mismatch), CoexistError);
}

TEST_CASE("tolerance precedence: defaults, workspace, then overrides") {
  Json j = Json::parse(R"({"dim": 2, "tolerances": {"eps_eq": 1e-6}})");
  CHECK(parse_workspace(j).tol.eq == 1e-6);
  CHECK(parse_workspace(j, {1e-4, std::nullopt}).tol.eq == 1e-4);
  CHECK(parse_workspace(Json::parse(R"({"dim": 2})")).tol.eq == Tolerance{}.eq);
}

TEST_CASE("run_command verdicts") {
  const Workspace ws = load_workspace(kData + "/qubit.json");
  const VerdictReport r1 = run_command(ws, cmd("coexist", {"Sz", "Sx"}));
  CHECK(r1.verdict == "INFEASIBLE");
  CHECK(r1.exit_code == kExitFails);

  const VerdictReport r2 = run_command(ws, cmd("coexist", {"Sz", "Nz"}));
  CHECK(r2.verdict == "COEXISTENT_FUNCTIONAL");
  CHECK(r2.exit_code == kExitHolds);
  CHECK(r2.certificates.contains("certificate"));
  // The emitted certificate validates on reload.
  CHECK_NOTHROW(certificate_from_json(r2.certificates.at("certificate")));

  const VerdictReport r3 = run_command(ws, cmd("comdomain", {"Sz", "Sx"}));
  CHECK(r3.exit_code == kExitHolds);
  CHECK(r3.certificates.at("subspace").at("dim") == 0);

  CHECK(run_command(ws, cmd("six-way", {"Sz", "Sz"})).exit_code == kExitHolds);
  CHECK(run_command(ws, cmd("six-way", {"Sz", "Sx"})).exit_code == kExitFails);
  CHECK(run_command(ws, cmd("sequential", {"Lz", "Lx"})).exit_code == kExitHolds);
  CHECK(run_command(ws, cmd("scheme-measure", {"Cnot"})).exit_code == kExitHolds);
}

TEST_CASE("joint-dist on the block pair") {
  const Workspace ws = load_workspace(kData + "/block4.json");
  const VerdictReport in = run_command(ws, cmd("joint-dist", {"A", "B", "phi"}));
  CHECK(in.exit_code == kExitHolds);
  const VerdictReport out = run_command(ws, cmd("joint-dist", {"A", "B", "out"}));
  CHECK(out.exit_code == kExitFails);
}

TEST_CASE("lookup and dispatch errors") {
  const Workspace ws = load_workspace(kData + "/qubit.json");
  CHECK_THROWS_AS(run_command(ws, cmd("coexist", {"Sz", "Nope"})), CoexistError);
  try {
    run_command(ws, cmd("frobnicate", {}));
    FAIL("expected UnknownCommand");
  } catch (const CoexistError& e) {
    CHECK(e.kind() == ErrorKind::UnknownCommand);
    CHECK(error_report("frobnicate", e).exit_code == kExitInputError);
  }
  CHECK(parse_subset("1,3", 3) == OutcomeSet{0, 2});
  CHECK_THROWS_AS(parse_subset("0", 3), CoexistError);
  CHECK_THROWS_AS(parse_subset("4", 3), CoexistError);
}

TEST_CASE("binary exit codes") {
  const std::string q = "-w " + kData + "/qubit.json ";
  CHECK(run_cli(q + "coexist Sz Sx").exit_code == 1);
  CHECK(run_cli(q + "coexist Sz Nz").exit_code == 0);
  CHECK(run_cli(q + "comdomain Sz Sx").exit_code == 0);
  CHECK(run_cli(q + "coexist Sz Nope").exit_code == 3);
  CHECK(run_cli(q + "frobnicate").exit_code == 3);
  CHECK(run_cli("-w " + kData + "/bad_normalization.json validate").exit_code == 3);
  CHECK(run_cli("-w " + kData + "/malformed.json validate").exit_code == 3);
  CHECK(run_cli(q + "validate").exit_code == 0);
}

TEST_CASE("json reports are deterministic apart from timing") {
  const std::string args = "-w " + kData + "/qubit.json --json coexist Nx Nz --seed 7";
  const Run a = run_cli(args);
  const Run b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(strip_timing(a.out) == strip_timing(b.out));
  const Json j = Json::parse(a.out);
  for (const char* key : {"certificates", "command", "exit_code", "residuals", "summary", "timing_ms", "verdict"})
    CHECK(j.contains(key));
  CHECK(j.at("command") == "coexist Nx Nz --seed 7 --max-iters 20000");
}
