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

#ifndef LINBANDIT_CALIBRATION_HPP_
#define LINBANDIT_CALIBRATION_HPP_

// Choosing the exploration scale p. Two families of lower bounds are
// provided: the headline bound C K L'^2 / (D'^2 S'^2) with a free universal
// constant C, and the three explicit conditions that the regret proof needs
// (128 K L^2 / (D^2 S^2), 16 K / (C_abs S^2) and 32 K). Primed quantities are
// clamped: L' = max(1, L), D' = min(1, Delta_min), S' = min(1, Sigma_min).
//
// The inputs can be estimated online while the policy runs: Sigma_min from
// the second moment of observed contexts, Delta_min from the smallest
// best-vs-runner-up margin seen at exploit time, and L from the spread of
// rewards observed for identical (arm, context) pairs.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "linbandit/environment.hpp"
#include "linbandit/linalg.hpp"
#include "linbandit/random.hpp"

namespace linbandit::calibration {

using linalg::SymMat;
using linalg::Vec;

struct ClampedInputs {
  double L = 1.0;
  double delta_min = 1.0;
  double sigma_min = 1.0;
};

// Throws std::invalid_argument unless all inputs are positive and finite.
ClampedInputs Clamp(double L, double delta_min, double sigma_min);

// Smallest multiple of K that is >= value (and >= K).
std::uint64_t RoundUpToMultiple(double value, std::size_t num_arms);

std::uint64_t PTheoremBound(std::size_t num_arms, double L, double delta_min,
                            double sigma_min, double C = 1.0);

std::uint64_t PStrictBound(std::size_t num_arms, double L, double delta_min,
                           double sigma_min, double C_abs = 1.0);

// p Dmax sqrt(d) + 14 Dmax sqrt(d) K e^{Q/4} + p Dmax sqrt(d) ln T.
double RegretUpperBound(std::uint64_t p, double delta_max, std::size_t dim,
                        std::size_t num_arms, double max_theta_norm,
                        std::uint64_t horizon);

// -- Online estimators ---------------------------------------------------------

// Running (1/n) sum x x^T over observed contexts.
class SecondMomentAccumulator {
 public:
  explicit SecondMomentAccumulator(std::size_t dim) : sum_(dim) {}

  void Add(const Vec& x);
  std::uint64_t count() const noexcept { return count_; }
  SymMat Mean() const;
  // Throws NoDataError with fewer than d samples.
  double SigmaMin(double rank_tol = linalg::kRankTol) const;

 private:
  SymMat sum_;
  std::uint64_t count_ = 0;
};

double EstimateSigmaMin(std::span<const Vec> contexts,
                        double rank_tol = linalg::kRankTol);

// Running minimum of the exploit-time margin between the best and the
// second-best predicted reward. Exact ties are counted but do not enter the
// minimum.
class DeltaMinTracker {
 public:
  void Observe(double margin);
  std::uint64_t observed() const noexcept { return observed_; }
  std::uint64_t ties() const noexcept { return ties_; }
  bool has_value() const noexcept { return observed_ > ties_; }
  // Throws NoDataError when no positive margin has been observed.
  double value() const;

 private:
  double min_ = 0.0;
  std::uint64_t observed_ = 0;
  std::uint64_t ties_ = 0;
};

double EstimateDeltaMin(std::span<const double> margins);

// Reward spread per (arm, context) group. Contexts are grouped by exact
// equality after quantizing entries to a 1e-9 grid.
class RewardGroups {
 public:
  static constexpr double kQuantum = 1e-9;
  static constexpr std::size_t kMaxGroups = 1 << 16;

  void Add(std::size_t arm, const Vec& x, double reward);
  std::size_t group_count() const noexcept { return groups_.size(); }
  std::uint64_t eligible_groups() const;
  // max over groups with >= 2 rewards of the sample standard deviation,
  // floored at 1. Throws NoDataError when no group is eligible.
  double EstimateL() const;

 private:
  struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
  };
  std::map<std::pair<std::size_t, std::vector<std::int64_t>>, Moments> groups_;
};

struct CalibrationReport {
  double sigma_min_hat = 0.0;
  double delta_min_hat = 0.0;
  double L_hat = 1.0;
  double C = 1.0;
  double C_abs = 1.0;
  std::uint64_t p_theorem = 0;
  std::uint64_t p_strict = 0;
  std::uint64_t context_samples = 0;
  std::uint64_t exploit_samples = 0;
  std::uint64_t reward_groups = 0;

  // Flat key=value pairs in a fixed order.
  std::vector<std::pair<std::string, std::string>> ToKeyValues() const;
};

CalibrationReport MakeReport(std::size_t num_arms, double sigma_min,
                             double delta_min, double L, double C = 1.0,
                             double C_abs = 1.0);

// -- Scaling scenario ----------------------------------------------------------

struct ScalingScenario {
  std::size_t dim = 1;
  std::size_t num_arms = 1;
  double w = 0.5;
  double F = 0.0;
  environment::EnvironmentSpec spec;
};

// Bernoulli(w)-normalized contexts, theta_a with U[0,1] entries normalized to
// unit length, rewards x^T (theta_a + f) with f entries in [-F, F].
ScalingScenario BuildScalingScenario(std::size_t dim, std::size_t num_arms,
                                     double w, double F, Rng& rng);

}  // namespace linbandit::calibration

#endif  // LINBANDIT_CALIBRATION_HPP_
