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

#ifndef LINBANDIT_ESTIMATOR_HPP_
#define LINBANDIT_ESTIMATOR_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linbandit/linalg.hpp"

namespace linbandit::estimator {

using linalg::SymMat;
using linalg::Vec;

// Contexts may exceed unit norm by this much before record() rejects them.
inline constexpr double kContextNormSlack = 1e-9;

// Regularization schedule lambda_n = 1 / sqrt(n).
inline double RidgeLambda(std::uint64_t n) {
  return 1.0 / std::sqrt(static_cast<double>(n));
}

struct Estimate {
  Vec theta_hat;
  std::uint64_t n_used = 0;
};

// Returns x^T theta_hat.
double Predict(const Estimate& e, const Vec& x);

// Sufficient statistics of one arm's recorded samples: the count n, the Gram
// matrix A = sum x x^T and the moment vector b = sum r x. The ridge estimate
// is cached until the next record().
class ArmState {
 public:
  ArmState() = default;
  explicit ArmState(std::size_t dim) : gram_(dim), moment_(dim) {}

  // Restores a state from its flat snapshot (see Snapshot()).
  static ArmState FromSnapshot(std::span<const double> snapshot);

  std::size_t dim() const noexcept { return moment_.dim(); }
  std::uint64_t n() const noexcept { return n_; }
  const SymMat& gram() const noexcept { return gram_; }
  const Vec& moment() const noexcept { return moment_; }
  bool dirty() const noexcept { return !cached_.has_value(); }

  // Adds one (context, reward) sample. Contexts with norm above
  // 1 + kContextNormSlack are rejected unless check_norm is false.
  void Record(const Vec& x, double reward, bool check_norm = true);

  // Solves (lambda_n I + A/n) theta = b/n. Throws NoDataError when n = 0.
  // With use_cache, repeated calls without an intervening Record() return the
  // stored solution.
  Estimate RidgeSolve(bool use_cache = true) const;

  // sqrt(x^T M^{-2} x) for M = lambda_n I + A/n, computed as |M^{-1} x|.
  double ConfidenceWidth(const Vec& x) const;

  // Flat record: d, n, packed upper triangle of A (row-major), b.
  std::vector<double> Snapshot() const;
  std::string SnapshotString() const;

 private:
  SymMat RegularizedGram() const;

  std::uint64_t n_ = 0;
  SymMat gram_;
  Vec moment_;
  mutable std::optional<Vec> cached_;
};

}  // namespace linbandit::estimator

#endif  // LINBANDIT_ESTIMATOR_HPP_
