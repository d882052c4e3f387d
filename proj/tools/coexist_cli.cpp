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

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "coexist/cli.hpp"

namespace {

struct SubcommandSpec {
  const char* name;
  const char* usage;
};

constexpr SubcommandSpec kSubcommands[] = {
    {"validate", "Validate every object in the workspace"},
    {"check-effect", "OBS [X]: effect and projection checks for atoms or a subset"},
    {"check-regular", "OBS: regularity with a witness subset on failure"},
    {"range-boolean", "OBS: Boolean lattice check of the range"},
    {"commute", "E1 E2: mutual commutation of all atoms"},
    {"coexist", "E1 E2: coexistence verdict with certificates"},
    {"two-valued-joint", "WITNESS X Y: joint for two two-valued coarse grainings"},
    {"commensurable", "E1 E2: commensurability of two PVMs"},
    {"six-way", "E1 E2: the six equivalent conditions for PVMs"},
    {"refine", "E1 E2: common refinement of commuting PVMs"},
    {"comdomain", "E1 E2: commutativity domain"},
    {"joint-dist", "E1 E2 PHI: joint distribution on the commutativity domain"},
    {"sequential", "I1 I2: sequential biobservable"},
    {"scheme-measure", "M: measured observable of a scheme"},
    {"scheme-build", "E: measurement scheme realizing an observable"},
    {"schemes-commute", "M1 M2: order independence of two schemes"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coexist: coexistence and joint measurability checks"};
  app.require_subcommand(1);

  std::string workspace_path;
  bool json = false;
  std::optional<double> tol_eq;
  std::optional<double> tol_psd;
  app.add_option("-w,--workspace", workspace_path, "Workspace JSON file")->required();
  app.add_flag("--json", json, "Machine-readable report");
  app.add_option("--tol-eq", tol_eq, "Equality tolerance override");
  app.add_option("--tol-psd", tol_psd, "Positivity tolerance override");

  coexist::Command command;
  for (const SubcommandSpec& entry : kSubcommands) {
    CLI::App* sub = app.add_subcommand(entry.name, entry.usage);
    sub->fallthrough();
    sub->add_option("args", command.args, "Positional arguments");
    sub->callback([&command, name = std::string(entry.name)] { command.name = name; });
    if (std::string(entry.name) == "coexist") {
      sub->add_option("--witness", command.witness, "Witness observable name");
      sub->add_option("--seed", command.seed, "Search seed");
      sub->add_option("--max-iters", command.max_iters, "Search iteration limit");
    }
    if (std::string(entry.name) == "sequential") {
      sub->add_flag("--compare-orders", command.compare_orders, "Compare both orders");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return coexist::kExitInputError;
  }

  auto emit = [json](const coexist::VerdictReport& r) {
    std::cout << (json ? coexist::render_json(r) : coexist::render_text(r));
    return r.exit_code;
  };

  const std::string echo = coexist::command_echo(command);
  try {
    const coexist::Workspace ws = coexist::load_workspace(workspace_path, {tol_eq, tol_psd});
    return emit(coexist::run_command(ws, command));
  } catch (const coexist::CoexistError& e) {
    std::cerr << e.what() << "\n";
    return emit(coexist::error_report(echo, e));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return emit(coexist::error_report(
        echo, coexist::CoexistError(coexist::ErrorKind::ValidationError, e.what())));
  }
}
