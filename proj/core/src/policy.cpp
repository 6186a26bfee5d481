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

#include "linbandit/policy.hpp"

#include <stdexcept>
#include <string>

#include "linbandit/error.hpp"

namespace linbandit::policy {

std::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kWarmup:
      return "warmup";
    case Mode::kExplore:
      return "explore";
    case Mode::kExploit:
      return "exploit";
  }
  return "unknown";
}

ArmIndex WarmupArm(std::uint64_t t, std::size_t num_arms) {
  if (num_arms == 0) throw std::invalid_argument("WarmupArm: K must be >= 1");
  return 1 + static_cast<ArmIndex>(t % num_arms);
}

bool ExploreCoin(std::uint64_t t, std::uint64_t p, Rng& rng) {
  if (t <= p) {
    throw std::logic_error("ExploreCoin: t = " + std::to_string(t) +
                           " is inside the warm-up regime (p = " +
                           std::to_string(p) + ")");
  }
  const double prob = static_cast<double>(p) / static_cast<double>(t);
  return Uniform01(rng) < prob;
}

GreedyChoice GreedySelect(const Vec& x, std::span<const Estimate> estimates) {
  if (estimates.empty()) {
    throw std::invalid_argument("GreedySelect: no estimates");
  }
  GreedyChoice choice;
  bool first = true;
  for (std::size_t a = 0; a < estimates.size(); ++a) {
    if (estimates[a].n_used == 0) {
      throw UninitializedArmError("GreedySelect: arm " + std::to_string(a + 1) +
                                  " has no recorded samples");
    }
    const double value = estimator::Predict(estimates[a], x);
    if (first) {
      choice.arm = a + 1;
      choice.best = value;
      first = false;
    } else if (value > choice.best) {
      choice.second = choice.best;
      choice.best = value;
      choice.arm = a + 1;
    } else if (!choice.second || value > *choice.second) {
      choice.second = value;
    }
  }
  return choice;
}

ArmIndex GreedyArm(const Vec& x, std::span<const Estimate> estimates) {
  return GreedySelect(x, estimates).arm;
}

Action UniformPolicyStep(std::size_t num_arms, Rng& rng, std::uint64_t t) {
  if (num_arms == 0) {
    throw std::invalid_argument("UniformPolicyStep: K must be >= 1");
  }
  Action action;
  action.t = t;
  action.arm = 1 + static_cast<ArmIndex>(UniformIndex(rng, num_arms));
  action.mode = Mode::kExplore;
  action.coin_probability = 1.0;
  return action;
}

// -- EpsGreedyPolicy ----------------------------------------------------------

void EpsGreedyConfig::Validate() const {
  if (num_arms < 1) throw std::invalid_argument("eps-greedy: K must be >= 1");
  if (dim < 1) throw std::invalid_argument("eps-greedy: d must be >= 1");
  if (p < num_arms) {
    throw std::invalid_argument("eps-greedy: p = " + std::to_string(p) +
                                " must be >= K = " + std::to_string(num_arms));
  }
  if (p % num_arms != 0) {
    throw std::invalid_argument("eps-greedy: p = " + std::to_string(p) +
                                " must be a multiple of K = " +
                                std::to_string(num_arms));
  }
}

EpsGreedyPolicy::EpsGreedyPolicy(const EpsGreedyConfig& config)
    : config_(config) {
  config_.Validate();
  arms_.assign(config_.num_arms, ArmState(config_.dim));
}

std::uint64_t EpsGreedyPolicy::total_recorded() const {
  std::uint64_t total = 0;
  for (const ArmState& s : arms_) total += s.n();
  return total;
}

Action EpsGreedyPolicy::Step(const Vec& x, Rng& rng) {
  return Decide(x, std::nullopt, rng);
}

Action EpsGreedyPolicy::StepWithCoin(const Vec& x, bool coin, Rng& rng) {
  return Decide(x, coin, rng);
}

std::vector<Estimate> EpsGreedyPolicy::Estimates() const {
  std::vector<Estimate> out;
  out.reserve(arms_.size());
  for (std::size_t a = 0; a < arms_.size(); ++a) {
    if (arms_[a].n() == 0) {
      throw UninitializedArmError("eps-greedy: arm " + std::to_string(a + 1) +
                                  " has no recorded samples at exploit time");
    }
    out.push_back(arms_[a].RidgeSolve(config_.cache_estimates));
  }
  return out;
}

Action EpsGreedyPolicy::Decide(const Vec& x, std::optional<bool> forced_coin,
                               Rng& rng) {
  if (x.dim() != config_.dim) {
    throw DimensionError("eps-greedy: context has dimension " +
                         std::to_string(x.dim()) + ", expected " +
                         std::to_string(config_.dim));
  }
  Action action;
  action.t = t_;
  if (t_ <= config_.p) {
    action.arm = WarmupArm(t_, config_.num_arms);
    action.mode = Mode::kWarmup;
    action.coin_probability = 1.0;
    return action;
  }

  action.coin_probability =
      static_cast<double>(config_.p) / static_cast<double>(t_);
  const bool explore =
      forced_coin.has_value() ? *forced_coin : ExploreCoin(t_, config_.p, rng);
  if (explore) {
    action.arm = 1 + static_cast<ArmIndex>(UniformIndex(rng, config_.num_arms));
    action.mode = Mode::kExplore;
    return action;
  }

  const std::vector<Estimate> estimates = Estimates();
  const GreedyChoice choice = GreedySelect(x, estimates);
  action.arm = choice.arm;
  action.mode = Mode::kExploit;
  if (choice.second) action.margin = choice.best - *choice.second;
  return action;
}

void EpsGreedyPolicy::Feed(const Action& action, const Vec& x, double reward) {
  if (action.t != t_) {
    throw StaleActionError("eps-greedy: action for t = " +
                           std::to_string(action.t) + " fed at t = " +
                           std::to_string(t_));
  }
  if (action.arm < 1 || action.arm > config_.num_arms) {
    throw std::out_of_range("eps-greedy: arm " + std::to_string(action.arm) +
                            " out of range");
  }
  if (action.mode != Mode::kExploit) {
    arms_[action.arm - 1].Record(x, reward, config_.enforce_unit_norm);
  }
  ++t_;
}

}  // namespace linbandit::policy
