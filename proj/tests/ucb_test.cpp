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

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "linbandit/error.hpp"
#include "linbandit/policy.hpp"
#include "oracles.hpp"

namespace linbandit::policy {
namespace {

using testing::Column;

std::vector<Sample> RandomHistory(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Sample> h;
  for (std::size_t k = 0; k < n; ++k) {
    h.push_back(Sample{Vec(testing::RandomUnitBallVector(rng, d)), normal(rng)});
  }
  return h;
}

std::vector<Column> Contexts(const std::vector<Sample>& h) {
  std::vector<Column> xs;
  for (const Sample& s : h) xs.push_back(s.x.data());
  return xs;
}

// Predicted reward of the ridge fit on the selected samples, through
// elimination on the unscaled normal equations.
double OracleSubsetPrediction(const std::vector<Sample>& h, std::uint32_t mask,
                              const Column& x) {
  std::vector<Column> xs;
  Column rs;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (mask & (1u << k)) {
      xs.push_back(h[k].x.data());
      rs.push_back(h[k].reward);
    }
  }
  const Column theta = testing::RidgeByNormalEquations(xs, rs, x.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += theta[i] * x[i];
  return s;
}

TEST(UcbWidthTest, MatchesIndependentEnumerator) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + rng() % 4;
    const std::size_t n = 1 + rng() % 10;
    const std::uint64_t t = 2 + rng() % 10'000;
    const std::vector<Sample> h = RandomHistory(rng, n, d);
    const Column x = testing::RandomUnitBallVector(rng, d);
    const UcbWidthResult got = UcbWidth(t, h, Vec(x));
    const testing::SubsetOracleResult want = testing::EnumerateSubsets(t, Contexts(h), x);
    EXPECT_EQ(got.subset, want.mask);
    EXPECT_NEAR(got.c, want.value, 1e-12 * std::max(1.0, want.value));
  }
}

TEST(UcbWidthTest, NoLargerThanFullHistoryOrAnySubset) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng() % 4;
    const std::size_t n = 2 + rng() % 10;
    const std::vector<Sample> h = RandomHistory(rng, n, d);
    const Column x = testing::RandomUnitBallVector(rng, d);
    const std::vector<Column> xs = Contexts(h);
    const UcbWidthResult got = UcbWidth(1000, h, Vec(x));
    std::vector<std::size_t> all(n);
    for (std::size_t k = 0; k < n; ++k) all[k] = k;
    EXPECT_LE(got.c, testing::SubsetObjective(1000, xs, all, x) * (1 + 1e-12));
    for (int s = 0; s < 100; ++s) {
      std::vector<std::size_t> members;
      for (std::size_t k = 0; k < n; ++k) {
        if (rng() & 1) members.push_back(k);
      }
      if (members.empty()) continue;
      EXPECT_LE(got.c, testing::SubsetObjective(1000, xs, members, x) * (1 + 1e-12));
    }
  }
}

TEST(UcbWidthTest, RejectsBadInput) {
  std::mt19937_64 rng(43);
  const std::vector<Sample> h = RandomHistory(rng, 3, 2);
  EXPECT_THROW(UcbWidth(1, h, Vec{1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(UcbWidth(5, std::vector<Sample>{}, Vec{1.0, 0.0}), NoDataError);
  EXPECT_THROW(UcbWidth(5, h, Vec{1.0}), DimensionError);
  EXPECT_THROW(UcbWidth(5, RandomHistory(rng, 21, 2), Vec{1.0, 0.0}),
               std::invalid_argument);
}

TEST(UcbWidthTest, CostDoublesPerExtraSample) {
  std::mt19937_64 rng(44);
  const std::vector<Sample> h = RandomHistory(rng, 10, 3);
  const Vec x(testing::RandomUnitBallVector(rng, 3));
  auto median_seconds = [&](std::size_t n) {
    const std::span<const Sample> prefix(h.data(), n);
    std::vector<double> times;
    for (int rep = 0; rep < 15; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      volatile double sink = UcbWidth(100, prefix, x).c;
      (void)sink;
      times.push_back(std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start).count());
    }
    std::nth_element(times.begin(), times.begin() + 7, times.end());
    return times[7];
  };
  const double t8 = median_seconds(8);
  const double t9 = median_seconds(9);
  const double t10 = median_seconds(10);
  EXPECT_GT(t9 / t8, 1.4);
  EXPECT_LT(t9 / t8, 3.0);
  EXPECT_GT(t10 / t9, 1.4);
  EXPECT_LT(t10 / t9, 3.0);
}

TEST(UcbPolicyTest, FirstExploitStepByHand) {
  UcbPolicy policy(UcbConfig{2, 2, 2, 12});
  const Action w1 = policy.Step(Vec{1.0, 0.0});
  EXPECT_EQ(w1.arm, 2u);
  policy.Feed(w1, Vec{1.0, 0.0}, 1.0);
  const Action w2 = policy.Step(Vec{0.0, 1.0});
  EXPECT_EQ(w2.arm, 1u);
  policy.Feed(w2, Vec{0.0, 1.0}, 0.5);
  // Arm 1: M = diag(1, 2), prediction 0, c = log 3.
  // Arm 2: M = diag(2, 1), prediction 1/2, c = log(3) / 4.
  const Action a = policy.Step(Vec{1.0, 0.0});
  EXPECT_EQ(a.mode, Mode::kExploit);
  EXPECT_EQ(a.arm, 1u);
  const double score1 = std::sqrt(std::log(3.0));
  const double score2 = 0.5 + std::sqrt(std::log(3.0) / 4.0);
  ASSERT_TRUE(a.margin.has_value());
  EXPECT_NEAR(*a.margin, score1 - score2, 1e-14);
}

TEST(UcbPolicyTest, ScriptedRunMatchesReferenceScores) {
  std::mt19937_64 rng(45);
  UcbPolicy policy(UcbConfig{2, 2, 2, 4});
  std::vector<std::vector<Sample>> hist(2);
  for (std::uint64_t t = 1; t <= 12; ++t) {
    const Column x = testing::RandomUnitBallVector(rng, 2);
    const Action a = policy.Step(Vec(x));
    if (t > 2) {
      double best = -1e300;
      std::size_t arm = 0;
      for (std::size_t k = 0; k < 2; ++k) {
        const auto w = testing::EnumerateSubsets(t, Contexts(hist[k]), x);
        const double score = OracleSubsetPrediction(hist[k], w.mask, x) + std::sqrt(w.value);
        if (score > best) {
          best = score;
          arm = k + 1;
        }
      }
      EXPECT_EQ(a.arm, arm) << "t=" << t;
    }
    const double reward = x[0] - 0.5 * x[1] * static_cast<double>(a.arm);
    policy.Feed(a, Vec(x), reward);
    hist[a.arm - 1].push_back(Sample{Vec(x), reward});
    if (hist[a.arm - 1].size() > 4) hist[a.arm - 1].erase(hist[a.arm - 1].begin());
    ASSERT_EQ(policy.history(a.arm).size(), hist[a.arm - 1].size());
  }
}

TEST(UcbPolicyTest, HistoryEvictsOldestSample) {
  UcbPolicy policy(UcbConfig{1, 1, 1, 3});
  for (int t = 1; t <= 5; ++t) {
    const Action a = policy.Step(Vec{0.5});
    policy.Feed(a, Vec{0.5}, static_cast<double>(t));
  }
  const auto h = policy.history(1);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h[0].reward, 3.0);
  EXPECT_EQ(h[2].reward, 5.0);
}

TEST(UcbConfigTest, RejectsOversizedCap) {
  EXPECT_THROW(UcbPolicy(UcbConfig{2, 2, 2, 21}), std::invalid_argument);
  EXPECT_THROW(UcbPolicy(UcbConfig{2, 2, 2, 0}), std::invalid_argument);
  EXPECT_THROW(UcbPolicy(UcbConfig{2, 2, 3, 4}), std::invalid_argument);
}

}  // namespace
}  // namespace linbandit::policy
