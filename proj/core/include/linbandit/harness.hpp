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

#ifndef LINBANDIT_HARNESS_HPP_
#define LINBANDIT_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "linbandit/calibration.hpp"
#include "linbandit/environment.hpp"
#include "linbandit/error.hpp"
#include "linbandit/policy.hpp"

namespace linbandit::harness {

using environment::EnvironmentSpec;

enum class PolicyKind { kEpsGreedy, kUcb, kUniform };

std::string_view PolicyKindName(PolicyKind kind);

struct PolicySpec {
  PolicyKind kind = PolicyKind::kEpsGreedy;
  std::uint64_t p = 0;  // 0 selects 32 K
  std::size_t history_cap = 12;
  bool cache_estimates = true;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct RunSpec {
  std::uint64_t horizon = 1;  // T
  std::uint64_t reps = 1;
  std::uint64_t base_seed = 0;
  std::string out_path;
  // Emit a row every log_every steps (plus T). 0 logs every step up to
  // kDenseLogLimit and switches to a geometric grid above it.
  std::uint64_t log_every = 0;
  std::vector<std::uint64_t> checkpoints;
  double C = 1.0;
  double C_abs = 1.0;

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

inline constexpr std::uint64_t kDenseLogLimit = 100'000;
inline constexpr double kGeometricLogRatio = 1.05;

struct RunConfig {
  EnvironmentSpec environment;
  PolicySpec policy;
  RunSpec run;
  // Factor the generated thetas were divided by (informational).
  double theta_scale = 1.0;

  std::uint64_t EffectiveP() const;
  // Throws ConfigError on any invalid combination.
  void Validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Raised when a step of a run fails; carries the step index.
class RunError : public Error {
 public:
  RunError(std::uint64_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint64_t step_;
};

struct ActionRecord {
  std::uint64_t t = 0;
  policy::Mode mode = policy::Mode::kWarmup;
  policy::ArmIndex arm = 1;
  double coin_probability = 1.0;
};

struct CalibrationObservations {
  explicit CalibrationObservations(std::size_t dim) : contexts(dim) {}
  calibration::SecondMomentAccumulator contexts;
  calibration::DeltaMinTracker margins;
  calibration::RewardGroups rewards;
};

struct RunOptions {
  bool collect_calibration = false;
  bool record_actions = false;
};

struct RegretTrace {
  std::uint64_t seed = 0;
  std::vector<double> cumulative;            // R(t) for t = 1..T
  std::vector<std::uint32_t> recorded;       // warm-up + explore steps up to t
  std::vector<std::uint64_t> per_arm_pulls;
  std::uint64_t warmup = 0;
  std::uint64_t explore = 0;
  std::uint64_t exploit = 0;
  // Per-arm state snapshots taken after each configured checkpoint step.
  std::map<std::uint64_t, std::vector<std::vector<double>>> snapshots;
  std::vector<ActionRecord> actions;
  std::vector<CalibrationObservations> calibration;  // empty or one entry
};

// Plays T rounds: context, decision, reward, feedback, regret. Deterministic
// in (config, seed).
RegretTrace RunOne(const RunConfig& config, std::uint64_t seed,
                   const RunOptions& options = {});

struct AggregateTrace {
  std::vector<std::uint64_t> t;
  std::vector<double> mean_regret;
  std::vector<double> std_regret;  // sample std across replications
  std::vector<double> explore_count_mean;
  std::vector<double> exploit_count_mean;
  std::uint64_t reps = 0;
  std::vector<double> final_regret;  // R(T) per replication
  std::vector<double> final_explore;  // warm-up + explore count per replication
};

// Row times for a horizon: see RunSpec::log_every.
std::vector<std::uint64_t> LogGrid(std::uint64_t horizon, std::uint64_t log_every);

AggregateTrace Aggregate(std::span<const RegretTrace> traces,
                         std::span<const std::uint64_t> grid);

// Worker threads used by Replicate(): LINBANDIT_THREADS, 0 or unset = auto.
std::size_t ReplicationThreads();

struct Replication {
  AggregateTrace aggregate;
  RegretTrace first;  // replication 0, with calibration observations
};

// Runs reps replications with seeds base_seed + i.
Replication ReplicateDetailed(const RunConfig& config, bool record_actions = false);
AggregateTrace Replicate(const RunConfig& config);

struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

// Least squares of R(t) against ln t over rows with t >= (1 - tail) * t_max.
LogFit FitLog(std::span<const std::uint64_t> t, std::span<const double> regret,
              double tail_fraction);
LogFit FitLog(const AggregateTrace& trace, double tail_fraction);

using HeaderBlock = std::vector<std::pair<std::string, std::string>>;

inline constexpr const char* kCsvColumns =
    "t,mean_regret,std_regret,explore_count_mean,exploit_count_mean";

// Header lines are written as "# key=value" before the column row.
void WriteCsv(const AggregateTrace& trace, std::ostream& out,
              const HeaderBlock& header = {});
void WriteCsv(const AggregateTrace& trace, const std::string& path,
              const HeaderBlock& header = {});
void WriteActionLog(std::span<const ActionRecord> actions, std::ostream& out);

// Calibration report plus instance facts for the CSV header.
HeaderBlock DescribeRun(const RunConfig& config, const Replication& result);

std::string VersionString();

}  // namespace linbandit::harness

#endif  // LINBANDIT_HARNESS_HPP_
