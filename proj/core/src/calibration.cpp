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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "linbandit/error.hpp"

namespace linbandit::calibration {
namespace {

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void RequirePositive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("calibration: ") + name +
                                " must be positive and finite");
  }
}

}  // namespace

ClampedInputs Clamp(double L, double delta_min, double sigma_min) {
  RequirePositive(L, "L");
  RequirePositive(delta_min, "delta_min");
  RequirePositive(sigma_min, "sigma_min");
  return ClampedInputs{std::max(1.0, L), std::min(1.0, delta_min),
                       std::min(1.0, sigma_min)};
}

std::uint64_t RoundUpToMultiple(double value, std::size_t num_arms) {
  if (num_arms == 0) throw std::invalid_argument("calibration: K must be >= 1");
  if (!(value >= 0.0)) throw std::invalid_argument("calibration: negative bound");
  const double k = static_cast<double>(num_arms);
  const double blocks = std::max(1.0, std::ceil(value / k));
  if (blocks * k > 9.0e18) {
    throw std::overflow_error("calibration: p bound does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(blocks) * num_arms;
}

std::uint64_t PTheoremBound(std::size_t num_arms, double L, double delta_min,
                            double sigma_min, double C) {
  RequirePositive(C, "C");
  const ClampedInputs in = Clamp(L, delta_min, sigma_min);
  const double k = static_cast<double>(num_arms);
  const double bound = C * k * in.L * in.L /
                       (in.delta_min * in.delta_min * in.sigma_min * in.sigma_min);
  return RoundUpToMultiple(bound, num_arms);
}

std::uint64_t PStrictBound(std::size_t num_arms, double L, double delta_min,
                           double sigma_min, double C_abs) {
  RequirePositive(C_abs, "C_abs");
  const ClampedInputs in = Clamp(L, delta_min, sigma_min);
  const double k = static_cast<double>(num_arms);
  const double s2 = in.sigma_min * in.sigma_min;
  const double noise = 128.0 * k * in.L * in.L / (in.delta_min * in.delta_min * s2);
  const double concentration = 16.0 * k / (C_abs * s2);
  const double count = 32.0 * k;
  return RoundUpToMultiple(std::max({noise, concentration, count}), num_arms);
}

double RegretUpperBound(std::uint64_t p, double delta_max, std::size_t dim,
                        std::size_t num_arms, double max_theta_norm,
                        std::uint64_t horizon) {
  const double scale = delta_max * std::sqrt(static_cast<double>(dim));
  const double pd = static_cast<double>(p);
  return pd * scale +
         14.0 * scale * static_cast<double>(num_arms) *
             std::exp(max_theta_norm / 4.0) +
         pd * scale * std::log(static_cast<double>(horizon));
}

// -- SecondMomentAccumulator ----------------------------------------------------

void SecondMomentAccumulator::Add(const Vec& x) {
  linalg::Rank1UpdateInPlace(sum_, x);
  ++count_;
}

SymMat SecondMomentAccumulator::Mean() const {
  if (count_ == 0) throw NoDataError("SecondMomentAccumulator: no samples");
  SymMat m = sum_;
  m *= 1.0 / static_cast<double>(count_);
  return m;
}

double SecondMomentAccumulator::SigmaMin(double rank_tol) const {
  if (count_ < sum_.dim()) {
    throw NoDataError("estimate_sigma_min: need at least d = " +
                      std::to_string(sum_.dim()) + " samples, have " +
                      std::to_string(count_));
  }
  return linalg::MinNonzeroEigenvalue(Mean(), rank_tol);
}

double EstimateSigmaMin(std::span<const Vec> contexts, double rank_tol) {
  if (contexts.empty()) throw NoDataError("estimate_sigma_min: empty stream");
  SecondMomentAccumulator acc(contexts.front().dim());
  for (const Vec& x : contexts) acc.Add(x);
  return acc.SigmaMin(rank_tol);
}

// -- DeltaMinTracker ------------------------------------------------------------

void DeltaMinTracker::Observe(double margin) {
  if (!(margin >= 0.0)) {
    throw std::invalid_argument("DeltaMinTracker: margin must be >= 0");
  }
  ++observed_;
  if (margin == 0.0) {
    ++ties_;
    return;
  }
  min_ = (observed_ - ties_ == 1) ? margin : std::min(min_, margin);
}

double DeltaMinTracker::value() const {
  if (!has_value()) {
    throw NoDataError("estimate_delta_min: no exploit step with a positive margin");
  }
  return min_;
}

double EstimateDeltaMin(std::span<const double> margins) {
  DeltaMinTracker tracker;
  for (double m : margins) tracker.Observe(m);
  return tracker.value();
}

// -- RewardGroups ----------------------------------------------------------------

void RewardGroups::Add(std::size_t arm, const Vec& x, double reward) {
  std::vector<std::int64_t> key(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    key[i] = static_cast<std::int64_t>(std::llround(x[i] / kQuantum));
  }
  auto it = groups_.find({arm, key});
  if (it == groups_.end()) {
    if (groups_.size() >= kMaxGroups) return;
    it = groups_.emplace(std::make_pair(arm, std::move(key)), Moments{}).first;
  }
  Moments& m = it->second;
  ++m.n;
  const double delta = reward - m.mean;
  m.mean += delta / static_cast<double>(m.n);
  m.m2 += delta * (reward - m.mean);
}

std::uint64_t RewardGroups::eligible_groups() const {
  std::uint64_t count = 0;
  for (const auto& [key, m] : groups_) count += m.n >= 2 ? 1 : 0;
  return count;
}

double RewardGroups::EstimateL() const {
  double best = -1.0;
  for (const auto& [key, m] : groups_) {
    if (m.n < 2) continue;
    best = std::max(best, std::sqrt(m.m2 / static_cast<double>(m.n - 1)));
  }
  if (best < 0.0) {
    throw NoDataError("estimate_L: no (arm, context) group has two rewards");
  }
  return std::max(1.0, best);
}

// -- Report -----------------------------------------------------------------------

CalibrationReport MakeReport(std::size_t num_arms, double sigma_min,
                             double delta_min, double L, double C,
                             double C_abs) {
  CalibrationReport r;
  r.sigma_min_hat = sigma_min;
  r.delta_min_hat = delta_min;
  r.L_hat = L;
  r.C = C;
  r.C_abs = C_abs;
  r.p_theorem = PTheoremBound(num_arms, L, delta_min, sigma_min, C);
  r.p_strict = PStrictBound(num_arms, L, delta_min, sigma_min, C_abs);
  return r;
}

std::vector<std::pair<std::string, std::string>> CalibrationReport::ToKeyValues()
    const {
  return {
      {"sigma_min_hat", FormatDouble(sigma_min_hat)},
      {"delta_min_hat", FormatDouble(delta_min_hat)},
      {"L_hat", FormatDouble(L_hat)},
      {"C", FormatDouble(C)},
      {"C_abs", FormatDouble(C_abs)},
      {"p_theorem", std::to_string(p_theorem)},
      {"p_strict", std::to_string(p_strict)},
      {"context_samples", std::to_string(context_samples)},
      {"exploit_samples", std::to_string(exploit_samples)},
      {"reward_groups", std::to_string(reward_groups)},
  };
}

// -- Scaling scenario ---------------------------------------------------------------

ScalingScenario BuildScalingScenario(std::size_t dim, std::size_t num_arms,
                                     double w, double F, Rng& rng) {
  if (!(w > 0.0 && w <= 1.0)) {
    throw std::invalid_argument("scaling scenario: w must be in (0,1]");
  }
  if (!(F >= 0.0) || !std::isfinite(F)) {
    throw std::invalid_argument("scaling scenario: F must be >= 0");
  }
  ScalingScenario s;
  s.dim = dim;
  s.num_arms = num_arms;
  s.w = w;
  s.F = F;
  s.spec.dim = dim;
  s.spec.num_arms = num_arms;
  s.spec.contexts = environment::BernoulliNormalized{w};
  s.spec.rewards = environment::EntryFluctuation{F};
  for (std::size_t a = 0; a < num_arms; ++a) {
    Vec theta(dim);
    double norm = 0.0;
    while (norm == 0.0) {
      for (std::size_t i = 0; i < dim; ++i) theta[i] = Uniform01(rng);
      norm = linalg::Norm2(theta);
    }
    theta *= 1.0 / norm;
    s.spec.thetas.push_back(std::move(theta));
  }
  s.spec.Validate();
  return s;
}

}  // namespace linbandit::calibration
