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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coexist/serialization.hpp"

namespace coexist {

// Named objects sharing one system dimension. Every object is validated
// against its own invariants while loading.
struct Workspace {
  Eigen::Index dim = 0;
  Tolerance tol;
  std::map<std::string, DiscreteObservable> observables;
  std::map<std::string, Instrument> instruments;
  std::map<std::string, MeasurementScheme> schemes;
  // Optional "vectors" section: named state vectors for joint-dist.
  std::map<std::string, CVector> vectors;

  const DiscreteObservable& observable(const std::string& name) const;
  const Instrument& instrument(const std::string& name) const;
  const MeasurementScheme& scheme(const std::string& name) const;
  const CVector& vector(const std::string& name) const;
};

struct ToleranceOverrides {
  std::optional<double> eq;
  std::optional<double> psd;
};

// Tolerance precedence: defaults, then the workspace "tolerances" section
// (keys eps_herm, eps_psd, eps_eq, eps_prob), then the overrides.
Workspace parse_workspace(const Json& j, const ToleranceOverrides& overrides = {});
Workspace load_workspace(const std::filesystem::path& path,
                         const ToleranceOverrides& overrides = {});

struct Command {
  std::string name;
  std::vector<std::string> args;
  std::optional<std::string> witness;
  std::uint64_t seed = 0;
  std::size_t max_iters = 20000;
  bool compare_orders = false;
};

std::string command_echo(const Command& c);

inline constexpr int kExitHolds = 0;
inline constexpr int kExitFails = 1;
inline constexpr int kExitIndeterminate = 2;
inline constexpr int kExitInputError = 3;

struct VerdictReport {
  std::string command;
  std::string verdict;
  int exit_code = kExitHolds;
  // Embedded artifacts and residuals; keys are sorted on output.
  Json certificates = Json::object();
  Json residuals = Json::object();
  std::vector<std::string> summary;
  double timing_ms = 0.0;
};

// Throws UnknownCommand, UnknownName, and module errors on bad input.
VerdictReport run_command(const Workspace& ws, const Command& command);

// Report for an input error, exit code 3.
VerdictReport error_report(const std::string& command, const CoexistError& err);

std::string render_json(const VerdictReport& r);
std::string render_text(const VerdictReport& r);

// "1,3,4" -> {0, 2, 3}. Throws ParseError or IndexOutOfRange.
OutcomeSet parse_subset(const std::string& text, std::size_t outcomes);

const std::vector<std::string>& command_names();

}  // namespace coexist
