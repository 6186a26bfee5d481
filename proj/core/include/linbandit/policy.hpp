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

#ifndef LINBANDIT_POLICY_HPP_
#define LINBANDIT_POLICY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "linbandit/estimator.hpp"
#include "linbandit/linalg.hpp"
#include "linbandit/random.hpp"

namespace linbandit::policy {

using estimator::ArmState;
using estimator::Estimate;
using linalg::Vec;

// Arms are numbered 1..K everywhere outside of container indexing.
using ArmIndex = std::size_t;

enum class Mode { kWarmup, kExplore, kExploit };

std::string_view ModeName(Mode mode);

struct Action {
  std::uint64_t t = 0;
  ArmIndex arm = 1;
  Mode mode = Mode::kWarmup;
  // Probability of the exploration coin at this step: 1 during warm-up,
  // p/t afterwards (0 for policies without a coin).
  double coin_probability = 1.0;
  // Best minus second-best predicted reward on exploit steps with K >= 2.
  std::optional<double> margin;
};

// Round-robin warm-up arm: 1 + (t mod K).
ArmIndex WarmupArm(std::uint64_t t, std::size_t num_arms);

// Bernoulli(p/t) draw. Throws std::logic_error when t <= p.
bool ExploreCoin(std::uint64_t t, std::uint64_t p, Rng& rng);

struct GreedyChoice {
  ArmIndex arm = 1;
  double best = 0.0;
  std::optional<double> second;
};

// Smallest index attaining max_a x^T theta_hat_a. Throws UninitializedArmError
// if some estimate was built from zero samples.
GreedyChoice GreedySelect(const Vec& x, std::span<const Estimate> estimates);
ArmIndex GreedyArm(const Vec& x, std::span<const Estimate> estimates);

// Uniform control policy: arm drawn uniformly, reported as an explore step.
Action UniformPolicyStep(std::size_t num_arms, Rng& rng, std::uint64_t t = 0);

// -- Contextual epsilon-greedy ------------------------------------------------

struct EpsGreedyConfig {
  std::size_t num_arms = 1;
  std::size_t dim = 1;
  std::uint64_t p = 1;
  std::uint64_t seed = 0;
  // Reject recorded contexts whose norm exceeds 1.
  bool enforce_unit_norm = true;
  // Reuse ridge solutions between exploit steps for arms untouched since the
  // last solve. Outputs are identical either way.
  bool cache_estimates = true;

  // Throws std::invalid_argument unless K >= 1, d >= 1, p >= K, p % K == 0.
  void Validate() const;
};

class EpsGreedyPolicy {
 public:
  explicit EpsGreedyPolicy(const EpsGreedyConfig& config);

  const EpsGreedyConfig& config() const noexcept { return config_; }
  std::uint64_t t() const noexcept { return t_; }
  const std::vector<ArmState>& arms() const noexcept { return arms_; }
  std::uint64_t total_recorded() const;

  // Chooses the arm for the current step. Does not advance t; call Feed()
  // with the returned action and the observed reward.
  Action Step(const Vec& x, Rng& rng);
  // Same as Step() past warm-up but with the exploration coin fixed.
  Action StepWithCoin(const Vec& x, bool coin, Rng& rng);

  // Records (x, r) for warm-up and explore actions; exploit rewards are
  // discarded. Advances t. Throws StaleActionError if action.t != t().
  void Feed(const Action& action, const Vec& x, double reward);

  std::vector<Estimate> Estimates() const;

 private:
  Action Decide(const Vec& x, std::optional<bool> forced_coin, Rng& rng);

  EpsGreedyConfig config_;
  std::uint64_t t_ = 1;
  std::vector<ArmState> arms_;
};

// -- Contextual UCB over capped histories -------------------------------------

inline constexpr std::size_t kMaxHistoryCap = 20;

struct Sample {
  Vec x;
  double reward = 0.0;
};

struct UcbConfig {
  std::size_t num_arms = 1;
  std::size_t dim = 1;
  std::uint64_t p = 1;
  std::size_t history_cap = 12;

  void Validate() const;
};

// Bit k of mask set means history[k] is in the subset.
using SubsetMask = std::uint32_t;

struct UcbWidthResult {
  // Squared width: min over nonempty T of (log t / |T|) x^T M_T^{-2} x with
  // M_T = lambda_|T| I + X_T^T X_T / |T|.
  double c = 0.0;
  SubsetMask subset = 0;
};

// Exhaustive minimum over all 2^n - 1 nonempty subsets of history. Requires
// 1 <= n <= kMaxHistoryCap and t >= 2. Ties keep the smallest mask.
UcbWidthResult UcbWidth(std::uint64_t t, std::span<const Sample> history,
                        const Vec& x);

// Ridge estimate restricted to the samples selected by mask.
Estimate SubsetRidge(std::span<const Sample> history, SubsetMask mask);

class UcbPolicy {
 public:
  explicit UcbPolicy(const UcbConfig& config);

  const UcbConfig& config() const noexcept { return config_; }
  std::uint64_t t() const noexcept { return t_; }
  std::span<const Sample> history(ArmIndex arm) const;

  Action Step(const Vec& x);
  // Appends (x, r) to the played arm's history, evicting the oldest sample
  // beyond the cap. Advances t.
  void Feed(const Action& action, const Vec& x, double reward);

 private:
  UcbConfig config_;
  std::uint64_t t_ = 1;
  std::vector<std::vector<Sample>> histories_;
};

}  // namespace linbandit::policy

#endif  // LINBANDIT_POLICY_HPP_
