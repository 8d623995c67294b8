// Copyright 2026 The ebilab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command line front end. Three subcommands:
//   run       load a scenario, execute its blocks, emit report files
//   validate  parse a scenario and report every violation with a field path
//   demo      print (or run) the bundled example scenario
// Exit codes: 0 success, 1 scenario/usage error, 2 runtime failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ebilab/ebilab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

struct Options {
  std::string scenario_path;
  std::string out_dir = "out";
  std::string format = "json-like";
  std::uint64_t seed_override = 0;
  bool has_seed_override = false;
  bool demo_execute = false;
};

int run_scenario(ebilab::Scenario scenario, const Options& opt) {
  if (opt.has_seed_override) scenario.seed = opt.seed_override;
  const ebilab::RunReport report = ebilab::run(scenario);
  const auto paths =
      ebilab::emit(report, ebilab::parse_emit_format(opt.format), opt.out_dir);
  std::printf("scenario '%s' (seed %llu): %zu file(s) written\n",
              report.scenario.name.c_str(),
              static_cast<unsigned long long>(report.scenario.seed),
              paths.size());
  for (const auto& path : paths) std::printf("  %s\n", path.c_str());
  std::printf("wall time %.3fs\n", report.wall_seconds);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ebilab: incentive-game scenario runner"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* run_cmd =
      app.add_subcommand("run", "execute a scenario and emit report files");
  run_cmd->add_option("--scenario", opt.scenario_path, "scenario file to run")
      ->required();
  run_cmd->add_option("--out", opt.out_dir,
                      "output directory (default: out)");
  run_cmd
      ->add_option("--format", opt.format,
                   "report format (default: json-like)")
      ->check(CLI::IsMember({"json-like", "json", "csv", "csv-tables"}));
  run_cmd
      ->add_option("--seed-override", opt.seed_override,
                   "replace the scenario seed before running")
      ->each([&opt](const std::string&) { opt.has_seed_override = true; });

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "parse a scenario and report every violation");
  validate_cmd
      ->add_option("--scenario", opt.scenario_path, "scenario file to check")
      ->required();

  CLI::App* demo_cmd =
      app.add_subcommand("demo", "print the bundled example scenario");
  demo_cmd->add_flag("--execute", opt.demo_execute,
                     "run the example instead of printing it");
  demo_cmd->add_option("--out", opt.out_dir,
                       "output directory for --execute (default: out)");
  demo_cmd
      ->add_option("--format", opt.format,
                   "report format for --execute (default: json-like)")
      ->check(CLI::IsMember({"json-like", "json", "csv", "csv-tables"}));
  demo_cmd
      ->add_option("--seed-override", opt.seed_override,
                   "replace the example seed for --execute")
      ->each([&opt](const std::string&) { opt.has_seed_override = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (run_cmd->parsed()) {
      return run_scenario(ebilab::parse_scenario(opt.scenario_path), opt);
    }
    if (validate_cmd->parsed()) {
      const ebilab::Scenario scenario =
          ebilab::parse_scenario(opt.scenario_path);
      std::printf("scenario '%s' is valid (seed %llu", scenario.name.c_str(),
                  static_cast<unsigned long long>(scenario.seed));
      std::string blocks;
      if (scenario.stage1) blocks += " stage1";
      if (scenario.stage2) blocks += " stage2";
      if (scenario.coalition) blocks += " coalition";
      if (scenario.prodfn) blocks += " prodfn";
      if (blocks.empty()) blocks = " none";
      std::printf(", blocks:%s)\n", blocks.c_str());
      return kExitOk;
    }
    if (demo_cmd->parsed()) {
      if (opt.demo_execute) {
        return run_scenario(ebilab::demo_scenario(), opt);
      }
      std::fputs(ebilab::demo_scenario_text(), stdout);
      return kExitOk;
    }
    std::fputs("no subcommand selected\n", stderr);
    return kExitInvalid;
  } catch (const ebilab::ScenarioError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
