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

#include "linbandit/calibration.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "linbandit/environment.hpp"
#include "linbandit/error.hpp"
#include "linbandit/policy.hpp"
#include "linbandit/random.hpp"
#include "oracles.hpp"

namespace linbandit::calibration {
namespace {

using environment::EnvironmentSpec;

TEST(PBoundTest, TheoremExamples) {
  EXPECT_EQ(PTheoremBound(6, 1.0, 1.0, 1.0), 6u);
  EXPECT_EQ(PTheoremBound(6, 2.0, 0.5, 0.5), 384u);
  EXPECT_EQ(PTheoremBound(6, 1.0, 3.0, 1.0), PTheoremBound(6, 1.0, 1.0, 1.0));
  EXPECT_EQ(PTheoremBound(6, 0.1, 1.0, 1.0), 6u);
  EXPECT_THROW(PTheoremBound(6, 0.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(PTheoremBound(6, 1.0, -1.0, 1.0), std::invalid_argument);
}

TEST(PBoundTest, StrictExamples) {
  EXPECT_EQ(PStrictBound(6, 1.0, 1.0, 1.0), 768u);
  EXPECT_EQ(PStrictBound(1, 1.0, 1.0, 1.0), 128u);
  EXPECT_THROW(PStrictBound(6, 1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(PBoundTest, MultiplesOfKAndMonotone) {
  for (std::size_t k : {1u, 2u, 3u, 6u, 7u}) {
    for (double L : {0.5, 1.0, 1.7, 3.0}) {
      for (double delta : {0.05, 0.3, 1.0}) {
        for (double sigma : {0.01, 0.2, 0.9}) {
          const auto pt = PTheoremBound(k, L, delta, sigma);
          const auto ps = PStrictBound(k, L, delta, sigma);
          EXPECT_EQ(pt % k, 0u);
          EXPECT_EQ(ps % k, 0u);
          EXPECT_GE(ps, 32 * k);
          EXPECT_GE(PStrictBound(k, L, delta, sigma), PTheoremBound(k, L, delta, sigma, 128.0));
          EXPECT_LE(PTheoremBound(k, L, delta * 1.5, sigma), pt);
          EXPECT_LE(PTheoremBound(k, L, delta, sigma * 1.5), pt);
          EXPECT_GE(PTheoremBound(k, L * 1.5, delta, sigma), pt);
          EXPECT_GE(PTheoremBound(k + 1, L, delta, sigma), pt);
          EXPECT_LE(PStrictBound(k, L, delta * 1.5, sigma), ps);
          EXPECT_LE(PStrictBound(k, L, delta, sigma * 1.5), ps);
          EXPECT_GE(PStrictBound(k, L * 1.5, delta, sigma), ps);
        }
      }
    }
  }
}

TEST(RegretUpperBoundTest, Arithmetic) {
  const double scale = 2.0 * std::sqrt(3.0);
  const double want = 10 * scale + 14 * scale * 6 * std::exp(0.25) + 10 * scale * std::log(100.0);
  EXPECT_NEAR(RegretUpperBound(10, 2.0, 3, 6, 1.0, 100), want, 1e-9);
}

TEST(SigmaMinEstimateTest, SingleDirection) {
  const std::vector<Vec> xs(5, Vec{1.0, 0.0});
  EXPECT_NEAR(EstimateSigmaMin(xs), 1.0, 1e-15);
  EXPECT_THROW(EstimateSigmaMin(std::vector<Vec>{Vec{1.0, 0.0}}), NoDataError);
}

TEST(SigmaMinEstimateTest, BernoulliStreamNearExact) {
  EnvironmentSpec spec;
  spec.dim = 3;
  spec.num_arms = 1;
  spec.thetas = {Vec(3)};
  const double exact = environment::ExactSigmaMin(spec);
  Rng rng = MakeRng(1, Stream::kEnvironment);
  SecondMomentAccumulator acc(3);
  for (int i = 0; i < 100'000; ++i) acc.Add(environment::SampleContext(spec, rng));
  EXPECT_NEAR(acc.SigmaMin(), exact, 0.1 * exact);
}

TEST(SigmaMinEstimateTest, TwoContextConverges) {
  EnvironmentSpec spec;
  spec.dim = 2;
  spec.num_arms = 1;
  spec.thetas = {Vec(2)};
  spec.contexts = environment::TwoContextPlanar(10.0);
  spec.unit_norm_enforced = false;
  const double exact = testing::TwoContextSigmaMin(10.0);
  EXPECT_NEAR(exact, (1.1 - std::sqrt(1.21 - 0.36)) / 2.0, 1e-15);
  Rng rng = MakeRng(2, Stream::kEnvironment);
  SecondMomentAccumulator acc(2);
  std::vector<double> errors;
  for (int n = 1; n <= 1'000'000; ++n) {
    acc.Add(environment::SampleContext(spec, rng));
    if (n == 1'000 || n == 1'000'000) errors.push_back(std::abs(acc.SigmaMin() - exact));
  }
  EXPECT_LT(errors[1], 0.05 * exact);
  EXPECT_LT(errors[1], errors[0] + 1e-4);
}

TEST(DeltaMinTest, RunningMinimum) {
  EXPECT_DOUBLE_EQ(EstimateDeltaMin(std::vector<double>{0.4, 0.1, 0.3}), 0.1);
  DeltaMinTracker tracker;
  EXPECT_THROW(tracker.value(), NoDataError);
  tracker.Observe(0.0);
  EXPECT_FALSE(tracker.has_value());
  tracker.Observe(0.25);
  EXPECT_EQ(tracker.ties(), 1u);
  EXPECT_DOUBLE_EQ(tracker.value(), 0.25);
  EXPECT_THROW(tracker.Observe(-0.1), std::invalid_argument);
}

TEST(DeltaMinTest, ConvergedRunNearExactGap) {
  // Figure-1(a)-style instance; margins from the last tenth of a long run.
  EnvironmentSpec spec;
  spec.dim = 3;
  spec.num_arms = 6;
  Rng inst = MakeRng(7, Stream::kInstance);
  spec.thetas = environment::GaussianThetas(3, 6, inst).thetas;
  const auto support = environment::EnumerateSupport(spec);
  const double exact = environment::ExactGaps(spec.thetas, support.points).delta_min;

  policy::EpsGreedyPolicy policy(policy::EpsGreedyConfig{6, 3, 192, 7});
  Rng env = MakeRng(7, Stream::kEnvironment);
  Rng prng = MakeRng(7, Stream::kPolicy);
  DeltaMinTracker tracker;
  const std::uint64_t horizon = 100'000;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const Vec x = environment::SampleContext(spec, env);
    const policy::Action a = policy.Step(x, prng);
    if (a.margin && t > horizon * 9 / 10) tracker.Observe(*a.margin);
    policy.Feed(a, x, environment::SampleReward(spec, a.arm, x, env));
  }
  ASSERT_TRUE(tracker.has_value());
  EXPECT_GT(tracker.value(), exact / 3.0);
  EXPECT_LT(tracker.value(), exact * 3.0);
}

TEST(EstimateLTest, DeterministicRewardsClampToOne) {
  RewardGroups groups;
  for (int i = 0; i < 10; ++i) groups.Add(1, Vec{1.0, 0.0}, 0.3);
  EXPECT_DOUBLE_EQ(groups.EstimateL(), 1.0);
}

TEST(EstimateLTest, NeedsRepeatedGroup) {
  RewardGroups groups;
  groups.Add(1, Vec{1.0, 0.0}, 0.3);
  groups.Add(2, Vec{1.0, 0.0}, 0.3);
  groups.Add(1, Vec{0.0, 1.0}, 0.3);
  EXPECT_EQ(groups.eligible_groups(), 0u);
  EXPECT_THROW(groups.EstimateL(), NoDataError);
}

TEST(EstimateLTest, UniformScaledRewardsClampToOne) {
  EnvironmentSpec spec;
  spec.dim = 1;
  spec.num_arms = 1;
  spec.thetas = {Vec{0.5}};
  Rng rng = MakeRng(3, Stream::kEnvironment);
  RewardGroups groups;
  for (int i = 0; i < 100'000; ++i) groups.Add(1, Vec{1.0}, environment::SampleReward(spec, 1, Vec{1.0}, rng));
  EXPECT_DOUBLE_EQ(groups.EstimateL(), 1.0);
}

TEST(EstimateLTest, GaussianNoiseScale) {
  EnvironmentSpec spec;
  spec.dim = 2;
  spec.num_arms = 1;
  spec.thetas = {Vec{0.3, 0.1}};
  spec.rewards = environment::AdditiveNoise{environment::NoiseKind::kGaussian, 2.0};
  Rng rng = MakeRng(4, Stream::kEnvironment);
  RewardGroups groups;
  const Vec x{0.6, 0.8};
  for (int i = 0; i < 100'000; ++i) groups.Add(1, x, environment::SampleReward(spec, 1, x, rng));
  EXPECT_NEAR(groups.EstimateL(), 2.0, 0.1);
}

TEST(ScalingScenarioTest, NoFluctuationIsDeterministic) {
  Rng rng = MakeRng(5, Stream::kInstance);
  const ScalingScenario s = BuildScalingScenario(6, 4, 0.5, 0.0, rng);
  Rng env = MakeRng(5, Stream::kEnvironment);
  for (int i = 0; i < 1000; ++i) {
    const Vec x = environment::SampleContext(s.spec, env);
    for (std::size_t a = 1; a <= 4; ++a) {
      EXPECT_DOUBLE_EQ(environment::SampleReward(s.spec, a, x, env),
                       linalg::Dot(x, s.spec.thetas[a - 1]));
    }
  }
  for (const Vec& theta : s.spec.thetas) {
    EXPECT_NEAR(linalg::Norm2(theta), 1.0, 1e-14);
    for (double v : theta.values()) EXPECT_GE(v, 0.0);
  }
}

TEST(ScalingScenarioTest, FluctuationBound) {
  Rng rng = MakeRng(6, Stream::kInstance);
  const ScalingScenario s = BuildScalingScenario(9, 3, 0.5, 0.2, rng);
  Rng env = MakeRng(6, Stream::kEnvironment);
  for (int i = 0; i < 10'000; ++i) {
    const Vec x = environment::SampleContext(s.spec, env);
    const double r = environment::SampleReward(s.spec, 2, x, env);
    const double dev = std::abs(r - linalg::Dot(x, s.spec.thetas[1]));
    EXPECT_LE(dev, 0.2 * linalg::Norm1(x) + 1e-14);
    EXPECT_LE(dev, 0.2 * 3.0 + 1e-14);
  }
}

TEST(ScalingScenarioTest, SigmaMinScalesAsInverseDimension) {
  std::vector<double> scaled;
  for (std::size_t d : {4u, 8u, 16u}) {
    Rng rng = MakeRng(d, Stream::kInstance);
    const ScalingScenario s = BuildScalingScenario(d, 2, 0.5, 0.1, rng);
    scaled.push_back(environment::ExactSigmaMin(s.spec) * static_cast<double>(d));
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  EXPECT_LE(*hi / *lo, 4.0);
}

TEST(ScalingScenarioTest, RejectsBadParameters) {
  Rng rng = MakeRng(7, Stream::kInstance);
  EXPECT_THROW(BuildScalingScenario(3, 2, 0.0, 0.1, rng), std::invalid_argument);
  EXPECT_THROW(BuildScalingScenario(3, 2, 0.5, -0.1, rng), std::invalid_argument);
}

}  // namespace
}  // namespace linbandit::calibration
