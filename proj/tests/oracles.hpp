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

#ifndef LINBANDIT_TESTS_ORACLES_HPP_
#define LINBANDIT_TESTS_ORACLES_HPP_

// Reference computations used only by tests. Nothing here calls into the
// library's numerical routines: dense matrices are plain row-major vectors
// and systems are solved by Gaussian elimination with partial pivoting.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace linbandit::testing {

using Dense = std::vector<double>;  // row-major n x n
using Column = std::vector<double>;

inline Column GaussSolve(Dense a, Column b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (a[pivot * n + col] == 0.0) throw std::runtime_error("singular");
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  Column x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
    x[r] = s / a[r * n + r];
  }
  return x;
}

// Eigenvalues of [[a, b], [b, c]] from the characteristic polynomial.
inline std::pair<double, double> Eigen2x2(double a, double b, double c) {
  const double tr = a + c;
  const double det = a * c - b * b;
  const double disc = std::sqrt(tr * tr - 4.0 * det);
  return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

// Sigma_min of the two-context family {(1,1) w.p. 1/I, (1,0) otherwise}:
// Sigma = [[1, 1/I], [1/I, 1/I]].
inline double TwoContextSigmaMin(double inverse_rate) {
  const double r = 1.0 / inverse_rate;
  return Eigen2x2(1.0, r, r).first;
}

inline Dense BatchGram(const std::vector<Column>& xs, std::size_t d) {
  Dense g(d * d, 0.0);
  for (const Column& x : xs) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) g[i * d + j] += x[i] * x[j];
    }
  }
  return g;
}

inline Column BatchMoment(const std::vector<Column>& xs, const Column& rs,
                          std::size_t d) {
  Column m(d, 0.0);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    for (std::size_t i = 0; i < d; ++i) m[i] += rs[k] * xs[k][i];
  }
  return m;
}

// Minimizer of (1/2n)|r - X theta|^2 + (lambda/2)|theta|^2 with
// lambda = 1/sqrt(n), from the normal equations (X^T X + n lambda I) theta =
// X^T r.
inline Column RidgeByNormalEquations(const std::vector<Column>& xs,
                                     const Column& rs, std::size_t d) {
  const double n = static_cast<double>(xs.size());
  Dense g = BatchGram(xs, d);
  for (std::size_t i = 0; i < d; ++i) g[i * d + i] += n / std::sqrt(n);
  return GaussSolve(std::move(g), BatchMoment(xs, rs, d));
}

// Subset search written independently of the library: depth-first
// include/exclude recursion, value through an explicit elimination solve.
struct SubsetOracleResult {
  double value = std::numeric_limits<double>::infinity();
  std::uint32_t mask = 0;
};

inline double SubsetObjective(std::uint64_t t, const std::vector<Column>& xs,
                              const std::vector<std::size_t>& members,
                              const Column& query) {
  const std::size_t d = query.size();
  const double size = static_cast<double>(members.size());
  Dense m(d * d, 0.0);
  for (std::size_t idx : members) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) m[i * d + j] += xs[idx][i] * xs[idx][j] / size;
    }
  }
  for (std::size_t i = 0; i < d; ++i) m[i * d + i] += 1.0 / std::sqrt(size);
  const Column w = GaussSolve(m, query);
  double ww = 0.0;
  for (double v : w) ww += v * v;
  return std::log(static_cast<double>(t)) / size * ww;
}

inline SubsetOracleResult EnumerateSubsets(std::uint64_t t,
                                           const std::vector<Column>& xs,
                                           const Column& query) {
  SubsetOracleResult best;
  std::vector<std::size_t> members;
  std::function<void(std::size_t)> visit = [&](std::size_t k) {
    if (k == xs.size()) {
      if (members.empty()) return;
      const double v = SubsetObjective(t, xs, members, query);
      std::uint32_t mask = 0;
      for (std::size_t idx : members) mask |= std::uint32_t{1} << idx;
      if (v < best.value || (v == best.value && mask < best.mask)) best = {v, mask};
      return;
    }
    members.push_back(k);
    visit(k + 1);
    members.pop_back();
    visit(k + 1);
  };
  visit(0);
  return best;
}

inline Column RandomUnitBallVector(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  Column x(d);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& v : x) v = normal(rng);
    norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
  }
  const double r = radius(rng);
  for (double& v : x) v *= r / norm;
  return x;
}

}  // namespace linbandit::testing

#endif  // LINBANDIT_TESTS_ORACLES_HPP_
