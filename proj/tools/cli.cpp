// Copyright 2026 The linbandit Authors. All rights reserved.
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

#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "linbandit/config.hpp"
#include "linbandit/error.hpp"
#include "linbandit/harness.hpp"

namespace linbandit::cli {

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Contextual linear bandit simulator", "linbandit"};
  app.set_version_flag("--version", harness::VersionString());

  std::string config_path;
  std::string scenario;
  std::string policy_name;
  std::string out_path;
  std::string action_log_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> reps;

  app.add_option("--config", config_path, "Run configuration file");
  app.add_option("--scenario", scenario,
                 "Built-in scenario: fig1a | fig1b:I | scaling:d,K | "
                 "twocontext:I (overrides --config)");
  app.add_option("--seed", seed, "Base seed (replication i uses seed + i)");
  app.add_option("--reps", reps, "Number of replications");
  app.add_option("--out", out_path, "CSV output path");
  app.add_option("--policy", policy_name, "Policy override")
      ->check(CLI::IsMember({"eps", "ucb", "uniform"}));
  app.add_option("--action-log", action_log_path,
                 "Write replication 0's action log (t, mode, arm, "
                 "coin_probability) to this path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << harness::VersionString() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfigError;
  }

  if (config_path.empty() && scenario.empty()) {
    err << "error: one of --config or --scenario is required\n" << app.help();
    return kExitConfigError;
  }

  harness::RunConfig config;
  try {
    if (!scenario.empty()) {
      config = config::Scenario(scenario, seed.value_or(7));
    } else {
      config = config::ReadConfig(config_path);
    }
    if (seed) config.run.base_seed = *seed;
    if (reps) config.run.reps = *reps;
    if (!out_path.empty()) config.run.out_path = out_path;
    if (policy_name == "eps") config.policy.kind = harness::PolicyKind::kEpsGreedy;
    if (policy_name == "ucb") config.policy.kind = harness::PolicyKind::kUcb;
    if (policy_name == "uniform") config.policy.kind = harness::PolicyKind::kUniform;
    config.Validate();
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    const harness::Replication result =
        harness::ReplicateDetailed(config, !action_log_path.empty());
    const harness::HeaderBlock header = harness::DescribeRun(config, result);
    if (config.run.out_path.empty()) {
      harness::WriteCsv(result.aggregate, out, header);
    } else {
      harness::WriteCsv(result.aggregate, config.run.out_path, header);
    }
    if (!action_log_path.empty()) {
      std::ofstream log(action_log_path, std::ios::binary);
      if (!log) throw Error("cannot open " + action_log_path + " for writing");
      harness::WriteActionLog(result.first.actions, log);
    }
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitOk;
}

}  // namespace linbandit::cli
