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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "linbandit/error.hpp"
#include "linbandit/random.hpp"
#include "oracles.hpp"

namespace linbandit::policy {
namespace {

// Chi-square critical value for 5 degrees of freedom at 0.001.
constexpr double kChi2Df5 = 20.515;

double ChiSquare(const std::vector<std::uint64_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double chi2 = 0.0;
  for (auto c : counts) {
    const double diff = static_cast<double>(c) - expected;
    chi2 += diff * diff / expected;
  }
  return chi2;
}

Estimate MakeEstimate(Vec theta) { return Estimate{std::move(theta), 1}; }

TEST(WarmupArmTest, CyclesThroughArms) {
  EXPECT_EQ(WarmupArm(1, 6), 2u);
  EXPECT_EQ(WarmupArm(5, 6), 6u);
  EXPECT_EQ(WarmupArm(6, 6), 1u);
  EXPECT_EQ(WarmupArm(7, 6), 2u);
  std::vector<int> seen(6, 0);
  for (std::uint64_t t = 1; t <= 192; ++t) ++seen[WarmupArm(t, 6) - 1];
  for (int c : seen) EXPECT_EQ(c, 32);
}

TEST(ExploreCoinTest, RefusesWarmupSteps) {
  Rng rng = MakeRng(1, Stream::kPolicy);
  EXPECT_THROW(ExploreCoin(32, 32, rng), std::logic_error);
}

TEST(ExploreCoinTest, FrequencyMatchesProbability) {
  Rng rng = MakeRng(2, Stream::kPolicy);
  const int draws = 1'000'000;
  for (std::uint64_t t : {64ull, 320ull, 32'000'000ull}) {
    const double prob = 32.0 / static_cast<double>(t);
    int heads = 0;
    for (int i = 0; i < draws; ++i) heads += ExploreCoin(t, 32, rng) ? 1 : 0;
    const double se = std::sqrt(draws * prob * (1.0 - prob));
    EXPECT_LE(std::abs(heads - draws * prob), 5.0 * std::max(se, 1.0)) << "t=" << t;
  }
}

TEST(ExploreCoinTest, DeterministicUnderSeed) {
  Rng a = MakeRng(3, Stream::kPolicy);
  Rng b = MakeRng(3, Stream::kPolicy);
  for (std::uint64_t t = 100; t < 10'000; ++t) {
    ASSERT_EQ(ExploreCoin(t, 60, a), ExploreCoin(t, 60, b));
  }
}

TEST(GreedySelectTest, TiesGoToLowestIndex) {
  const std::vector<Estimate> est = {MakeEstimate(Vec{1.0, 0.0}),
                                     MakeEstimate(Vec{0.0, 2.0}),
                                     MakeEstimate(Vec{0.0, 2.0})};
  EXPECT_EQ(GreedyArm(Vec{0.0, 1.0}, est), 2u);
  EXPECT_EQ(GreedyArm(Vec{2.0, 1.0}, est), 1u);
  const GreedyChoice c = GreedySelect(Vec{0.0, 1.0}, est);
  EXPECT_DOUBLE_EQ(c.best, 2.0);
  EXPECT_DOUBLE_EQ(*c.second, 2.0);
}

TEST(GreedySelectTest, UninitializedArmIsAnError) {
  const std::vector<Estimate> est = {MakeEstimate(Vec{1.0}), Estimate{Vec{0.0}, 0}};
  EXPECT_THROW(GreedyArm(Vec{1.0}, est), UninitializedArmError);
}

TEST(GreedySelectTest, InvariantToPositiveScalingAndZeroPadding) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + rng() % 5;
    const std::size_t k = 2 + rng() % 5;
    std::vector<Estimate> est;
    std::vector<Estimate> padded;
    for (std::size_t a = 0; a < k; ++a) {
      Vec theta(d);
      for (std::size_t i = 0; i < d; ++i) theta[i] = normal(rng);
      std::vector<double> wide(theta.data());
      wide.push_back(normal(rng));
      est.push_back(MakeEstimate(theta));
      padded.push_back(MakeEstimate(Vec(wide)));
    }
    const Vec x(testing::RandomUnitBallVector(rng, d));
    std::vector<double> xw(x.data());
    xw.push_back(0.0);
    const ArmIndex arm = GreedyArm(x, est);
    EXPECT_EQ(GreedyArm(3.5 * x, est), arm);
    EXPECT_EQ(GreedyArm(Vec(xw), padded), arm);
  }
}

TEST(UniformPolicyTest, ArmsAreUniform) {
  Rng rng = MakeRng(4, Stream::kPolicy);
  std::vector<std::uint64_t> counts(6, 0);
  for (int i = 0; i < 100'000; ++i) {
    const Action a = UniformPolicyStep(6, rng, i + 1);
    EXPECT_EQ(a.mode, Mode::kExplore);
    ++counts[a.arm - 1];
  }
  EXPECT_LT(ChiSquare(counts), kChi2Df5);
}

TEST(EpsGreedyConfigTest, RejectsInvalidWarmup) {
  EXPECT_THROW(EpsGreedyPolicy(EpsGreedyConfig{6, 3, 4, 0}), std::invalid_argument);
  EXPECT_THROW(EpsGreedyPolicy(EpsGreedyConfig{6, 3, 20, 0}), std::invalid_argument);
  EXPECT_NO_THROW(EpsGreedyPolicy(EpsGreedyConfig{6, 3, 18, 0}));
}

TEST(EpsGreedyPolicyTest, WarmupRecordsEveryArmEquallyOften) {
  EpsGreedyPolicy policy(EpsGreedyConfig{3, 2, 12, 0});
  Rng rng = MakeRng(5, Stream::kPolicy);
  for (int t = 1; t <= 12; ++t) {
    const Vec x{0.6, 0.8};
    const Action a = policy.Step(x, rng);
    EXPECT_EQ(a.mode, Mode::kWarmup);
    EXPECT_EQ(a.coin_probability, 1.0);
    EXPECT_EQ(a.arm, WarmupArm(t, 3));
    policy.Feed(a, x, 0.1);
  }
  for (const auto& arm : policy.arms()) EXPECT_EQ(arm.n(), 4u);
}

TEST(EpsGreedyPolicyTest, ForcedExploreIsUniform) {
  EpsGreedyPolicy policy(EpsGreedyConfig{6, 2, 6, 0});
  Rng rng = MakeRng(6, Stream::kPolicy);
  const Vec x{1.0, 0.0};
  for (int t = 1; t <= 6; ++t) policy.Feed(policy.Step(x, rng), x, 0.0);
  std::vector<std::uint64_t> counts(6, 0);
  for (int i = 0; i < 100'000; ++i) {
    const Action a = policy.StepWithCoin(x, true, rng);
    ASSERT_EQ(a.mode, Mode::kExplore);
    ++counts[a.arm - 1];
    policy.Feed(a, x, 0.0);
  }
  EXPECT_LT(ChiSquare(counts), kChi2Df5);
  EXPECT_EQ(policy.total_recorded(), 100'006u);
}

TEST(EpsGreedyPolicyTest, ExploitFeedDoesNotRecord) {
  EpsGreedyPolicy policy(EpsGreedyConfig{2, 2, 2, 0});
  Rng rng = MakeRng(7, Stream::kPolicy);
  policy.Feed(policy.Step(Vec{1.0, 0.0}, rng), Vec{1.0, 0.0}, 0.2);
  policy.Feed(policy.Step(Vec{0.0, 1.0}, rng), Vec{0.0, 1.0}, 0.9);
  const Action a = policy.StepWithCoin(Vec{0.0, 1.0}, false, rng);
  EXPECT_EQ(a.mode, Mode::kExploit);
  EXPECT_DOUBLE_EQ(a.coin_probability, 2.0 / 3.0);
  ASSERT_TRUE(a.margin.has_value());
  const auto before = policy.total_recorded();
  policy.Feed(a, Vec{0.0, 1.0}, 5.0);
  EXPECT_EQ(policy.total_recorded(), before);
  EXPECT_EQ(policy.t(), 4u);
}

TEST(EpsGreedyPolicyTest, ExploitPicksArmWithBestPrediction) {
  // Warm-up feeds arm 2 at t=1 and arm 1 at t=2.
  EpsGreedyPolicy policy(EpsGreedyConfig{2, 2, 2, 0});
  Rng rng = MakeRng(8, Stream::kPolicy);
  policy.Feed(policy.Step(Vec{1.0, 0.0}, rng), Vec{1.0, 0.0}, 1.0);
  policy.Feed(policy.Step(Vec{1.0, 0.0}, rng), Vec{1.0, 0.0}, -1.0);
  EXPECT_EQ(policy.StepWithCoin(Vec{1.0, 0.0}, false, rng).arm, 2u);
}

TEST(EpsGreedyPolicyTest, StaleFeedIsRejected) {
  EpsGreedyPolicy policy(EpsGreedyConfig{2, 2, 2, 0});
  Rng rng = MakeRng(9, Stream::kPolicy);
  const Action a = policy.Step(Vec{1.0, 0.0}, rng);
  policy.Feed(a, Vec{1.0, 0.0}, 0.0);
  EXPECT_THROW(policy.Feed(a, Vec{1.0, 0.0}, 0.0), StaleActionError);
}

TEST(EpsGreedyPolicyTest, DimensionMismatchIsRejected) {
  EpsGreedyPolicy policy(EpsGreedyConfig{2, 2, 2, 0});
  Rng rng = MakeRng(10, Stream::kPolicy);
  EXPECT_THROW(policy.Step(Vec{1.0}, rng), DimensionError);
}

TEST(EpsGreedyPolicyTest, CachedAndUncachedRunsAgree) {
  EpsGreedyConfig cached{3, 3, 6, 0};
  EpsGreedyConfig uncached = cached;
  uncached.cache_estimates = false;
  EpsGreedyPolicy a(cached);
  EpsGreedyPolicy b(uncached);
  Rng ra = MakeRng(11, Stream::kPolicy);
  Rng rb = MakeRng(11, Stream::kPolicy);
  std::mt19937_64 ctx(12);
  for (int t = 1; t <= 2000; ++t) {
    const Vec x(testing::RandomUnitBallVector(ctx, 3));
    const Action aa = a.Step(x, ra);
    const Action ab = b.Step(x, rb);
    ASSERT_EQ(aa.arm, ab.arm);
    ASSERT_EQ(aa.mode, ab.mode);
    const double r = x[0] * static_cast<double>(aa.arm);
    a.Feed(aa, x, r);
    b.Feed(ab, x, r);
  }
}

}  // namespace
}  // namespace linbandit::policy
