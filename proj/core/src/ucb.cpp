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

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "linbandit/error.hpp"
#include "linbandit/policy.hpp"

namespace linbandit::policy {
namespace {

// lambda_|T| I + X_T^T X_T / |T| for the samples selected by mask.
linalg::SymMat SubsetSystem(std::span<const Sample> history, SubsetMask mask,
                            std::size_t dim) {
  linalg::SymMat m(dim);
  for (std::size_t k = 0; k < history.size(); ++k) {
    if (mask & (SubsetMask{1} << k)) linalg::Rank1UpdateInPlace(m, history[k].x);
  }
  const auto size = static_cast<std::uint64_t>(std::popcount(mask));
  m *= 1.0 / static_cast<double>(size);
  m.AddDiagonal(estimator::RidgeLambda(size));
  return m;
}

}  // namespace

UcbWidthResult UcbWidth(std::uint64_t t, std::span<const Sample> history,
                        const Vec& x) {
  if (history.empty()) throw NoDataError("UcbWidth: empty history");
  if (history.size() > kMaxHistoryCap) {
    throw std::invalid_argument("UcbWidth: history of " +
                                std::to_string(history.size()) +
                                " samples exceeds the exhaustive-search cap");
  }
  if (t < 2) throw std::invalid_argument("UcbWidth: t must be >= 2");
  const std::size_t dim = x.dim();
  for (const Sample& s : history) {
    if (s.x.dim() != dim) throw DimensionError("UcbWidth: dimension mismatch");
  }

  const double log_t = std::log(static_cast<double>(t));
  const SubsetMask end = SubsetMask{1} << history.size();
  UcbWidthResult best{std::numeric_limits<double>::infinity(), 0};
  for (SubsetMask mask = 1; mask < end; ++mask) {
    const linalg::Vec w = linalg::SpdSolve(SubsetSystem(history, mask, dim), x);
    const double value =
        log_t / static_cast<double>(std::popcount(mask)) * linalg::Dot(w, w);
    if (value < best.c) best = {value, mask};
  }
  return best;
}

Estimate SubsetRidge(std::span<const Sample> history, SubsetMask mask) {
  if (mask == 0) throw NoDataError("SubsetRidge: empty subset");
  if (history.empty()) throw NoDataError("SubsetRidge: empty history");
  const std::size_t dim = history.front().x.dim();
  Vec rhs(dim);
  for (std::size_t k = 0; k < history.size(); ++k) {
    if (mask & (SubsetMask{1} << k)) {
      for (std::size_t i = 0; i < dim; ++i) {
        rhs[i] += history[k].reward * history[k].x[i];
      }
    }
  }
  const auto size = static_cast<std::uint64_t>(std::popcount(mask));
  rhs *= 1.0 / static_cast<double>(size);
  return Estimate{linalg::SpdSolve(SubsetSystem(history, mask, dim), rhs), size};
}

void UcbConfig::Validate() const {
  if (num_arms < 1) throw std::invalid_argument("ucb: K must be >= 1");
  if (dim < 1) throw std::invalid_argument("ucb: d must be >= 1");
  if (p < num_arms || p % num_arms != 0) {
    throw std::invalid_argument("ucb: p must be a positive multiple of K");
  }
  if (history_cap < 1 || history_cap > kMaxHistoryCap) {
    throw std::invalid_argument("ucb: history cap must be in [1, " +
                                std::to_string(kMaxHistoryCap) + "]");
  }
}

UcbPolicy::UcbPolicy(const UcbConfig& config) : config_(config) {
  config_.Validate();
  histories_.resize(config_.num_arms);
}

std::span<const Sample> UcbPolicy::history(ArmIndex arm) const {
  return histories_.at(arm - 1);
}

Action UcbPolicy::Step(const Vec& x) {
  if (x.dim() != config_.dim) throw DimensionError("ucb: dimension mismatch");
  Action action;
  action.t = t_;
  if (t_ <= config_.p) {
    action.arm = WarmupArm(t_, config_.num_arms);
    action.mode = Mode::kWarmup;
    return action;
  }
  action.mode = Mode::kExploit;
  action.coin_probability = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  std::optional<double> second;
  for (std::size_t a = 0; a < histories_.size(); ++a) {
    if (histories_[a].empty()) {
      throw UninitializedArmError("ucb: arm " + std::to_string(a + 1) +
                                  " has an empty history");
    }
    const UcbWidthResult width = UcbWidth(t_, histories_[a], x);
    const Estimate est = SubsetRidge(histories_[a], width.subset);
    const double score = estimator::Predict(est, x) + std::sqrt(width.c);
    if (score > best) {
      if (a > 0) second = best;
      best = score;
      action.arm = a + 1;
    } else if (!second || score > *second) {
      second = score;
    }
  }
  if (second) action.margin = best - *second;
  return action;
}

void UcbPolicy::Feed(const Action& action, const Vec& x, double reward) {
  if (action.t != t_) {
    throw StaleActionError("ucb: action for t = " + std::to_string(action.t) +
                           " fed at t = " + std::to_string(t_));
  }
  if (action.arm < 1 || action.arm > config_.num_arms) {
    throw std::out_of_range("ucb: arm out of range");
  }
  std::vector<Sample>& h = histories_[action.arm - 1];
  h.push_back(Sample{x, reward});
  if (h.size() > config_.history_cap) h.erase(h.begin());
  ++t_;
}

}  // namespace linbandit::policy
