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

#ifndef LINBANDIT_ENVIRONMENT_HPP_
#define LINBANDIT_ENVIRONMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "linbandit/linalg.hpp"
#include "linbandit/policy.hpp"
#include "linbandit/random.hpp"

namespace linbandit::environment {

using linalg::SymMat;
using linalg::Vec;
using policy::ArmIndex;

// Exact oracles refuse supports larger than this.
inline constexpr std::size_t kMaxEnumerableSupport = 1'000'000;

// -- Context distributions ----------------------------------------------------

// Entries i.i.d. Bernoulli(q), redrawn while all-zero, then l2-normalized.
struct BernoulliNormalized {
  double q = 0.5;
  friend bool operator==(const BernoulliNormalized&,
                         const BernoulliNormalized&) = default;
};

// Categorical draw over explicit points.
struct FiniteSupport {
  std::vector<Vec> points;
  std::vector<double> probs;
  friend bool operator==(const FiniteSupport&, const FiniteSupport&) = default;
};

// x_rare with probability 1/I, x_common otherwise.
struct TwoContext {
  double inverse_rate = 5.0;  // I
  Vec x_rare;
  Vec x_common;
  friend bool operator==(const TwoContext&, const TwoContext&) = default;
};

using ContextDistribution =
    std::variant<BernoulliNormalized, FiniteSupport, TwoContext>;

// The d = 3 family with x_rare = (1,1,1) and x_common = (1,0,1). Not unit
// norm.
TwoContext TwoContextCube(double inverse_rate);
// The d = 2 family with x_rare = (1,1) and x_common = (1,0).
TwoContext TwoContextPlanar(double inverse_rate);

// -- Reward models ------------------------------------------------------------

// Uniform on the interval between 0 and 2 x^T theta_a, so the mean is
// x^T theta_a whatever its sign.
struct UniformScaled {
  friend bool operator==(const UniformScaled&, const UniformScaled&) = default;
};

enum class NoiseKind { kGaussian, kUniform, kRademacher };

// x^T theta_a + scale * e, e standard normal, uniform on [-1, 1], or +-1.
struct AdditiveNoise {
  NoiseKind kind = NoiseKind::kGaussian;
  double scale = 1.0;
  friend bool operator==(const AdditiveNoise&, const AdditiveNoise&) = default;
};

// x^T (theta_a + f) with every entry of f drawn from U[-bound, bound] afresh
// on each pull.
struct EntryFluctuation {
  double bound = 0.0;
  friend bool operator==(const EntryFluctuation&,
                         const EntryFluctuation&) = default;
};

using RewardModel = std::variant<UniformScaled, AdditiveNoise, EntryFluctuation>;

struct EnvironmentSpec {
  std::size_t dim = 1;
  std::size_t num_arms = 1;
  ContextDistribution contexts = BernoulliNormalized{};
  std::vector<Vec> thetas;
  RewardModel rewards = UniformScaled{};
  // False for the literal two-context families whose points exceed unit norm.
  bool unit_norm_enforced = true;

  // Throws std::invalid_argument on any violated invariant.
  void Validate() const;

  friend bool operator==(const EnvironmentSpec&,
                         const EnvironmentSpec&) = default;
};

Vec SampleContext(const EnvironmentSpec& spec, Rng& rng);
double SampleReward(const EnvironmentSpec& spec, ArmIndex arm, const Vec& x,
                    Rng& rng);

// Lowest-index maximizer of x^T theta_a.
ArmIndex BestArm(const Vec& x, std::span<const Vec> thetas);
double StepRegret(const Vec& x, ArmIndex arm, std::span<const Vec> thetas);

double DeltaMax(std::span<const Vec> thetas);
// Largest theta norm (Q).
double MaxThetaNorm(std::span<const Vec> thetas);

struct Gaps {
  double delta_min = 0.0;
  double delta_max = 0.0;
};

// Throws DegenerateInstanceError when no context has a strictly suboptimal
// arm, std::invalid_argument when the support is too large.
Gaps ExactGaps(std::span<const Vec> thetas, std::span<const Vec> support);

struct WeightedSupport {
  std::vector<Vec> points;
  std::vector<double> probs;
};

// Enumerates the context distribution with exact probabilities.
WeightedSupport EnumerateSupport(const EnvironmentSpec& spec);

// Sigma = E[x x^T] summed over the enumerated support.
SymMat ExactCovariance(const EnvironmentSpec& spec);
double ExactSigmaMin(const EnvironmentSpec& spec,
                     double rank_tol = linalg::kRankTol);

struct ThetaDraw {
  std::vector<Vec> thetas;
  // Factor every draw was divided by to bring max_a |theta_a| to 1 (1 when
  // already within the unit ball).
  double scale = 1.0;
};

// Standard Gaussian parameters, rescaled by the largest norm when it exceeds
// 1.
ThetaDraw GaussianThetas(std::size_t dim, std::size_t num_arms, Rng& rng);

// -- Regret ledger ------------------------------------------------------------

class RegretLedger {
 public:
  explicit RegretLedger(std::size_t num_arms, std::size_t horizon_hint = 0);

  // Appends step t (must be exactly one past the last accrued step).
  void Accrue(std::uint64_t t, const Vec& x, const policy::Action& action,
              std::span<const Vec> thetas);

  std::uint64_t steps() const noexcept { return cumulative_.size(); }
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  double total() const noexcept {
    return cumulative_.empty() ? 0.0 : cumulative_.back();
  }
  const std::vector<std::uint64_t>& per_arm_pulls() const noexcept {
    return pulls_;
  }
  std::uint64_t warmup_count() const noexcept { return warmup_; }
  std::uint64_t explore_count() const noexcept { return explore_; }
  std::uint64_t exploit_count() const noexcept { return exploit_; }

 private:
  std::vector<double> cumulative_;
  std::vector<std::uint64_t> pulls_;
  std::uint64_t warmup_ = 0;
  std::uint64_t explore_ = 0;
  std::uint64_t exploit_ = 0;
};

}  // namespace linbandit::environment

#endif  // LINBANDIT_ENVIRONMENT_HPP_
