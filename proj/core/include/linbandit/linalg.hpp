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

#ifndef LINBANDIT_LINALG_HPP_
#define LINBANDIT_LINALG_HPP_

// Dense real linear algebra for the small symmetric systems that show up in
// per-arm regression (d up to a few dozen).

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace linbandit::linalg {

inline constexpr double kPivotTol = 1e-12;
inline constexpr double kJacobiTol = 1e-12;
inline constexpr double kRankTol = 1e-9;

class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t dim, double fill = 0.0) : data_(dim, fill) {}
  Vec(std::initializer_list<double> values) : data_(values) {}
  explicit Vec(std::vector<double> values) : data_(std::move(values)) {}
  explicit Vec(std::span<const double> values)
      : data_(values.begin(), values.end()) {}

  static Vec Basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return data_.size(); }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool AllFinite() const;

  Vec& operator+=(const Vec& other);
  Vec& operator-=(const Vec& other);
  Vec& operator*=(double s);

  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  std::vector<double> data_;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator*(double s, Vec v);

double Dot(const Vec& a, const Vec& b);
double Norm2(const Vec& v);
double NormInf(const Vec& v);
double Norm1(const Vec& v);

// Symmetric matrix stored as its packed upper triangle, row-major. M(i, j)
// and M(j, i) read the same slot, so symmetry is structural.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(std::size_t dim) : dim_(dim), packed_(dim * (dim + 1) / 2) {}

  static SymMat Identity(std::size_t dim, double scale = 1.0);
  // Builds from a full row-major dim x dim array; throws if it is not
  // exactly symmetric.
  static SymMat FromDense(std::size_t dim, std::span<const double> rows);
  // Builds from the packed upper triangle (row-major, dim*(dim+1)/2 values).
  static SymMat FromPacked(std::size_t dim, std::span<const double> packed);

  std::size_t dim() const noexcept { return dim_; }

  double operator()(std::size_t i, std::size_t j) const {
    return packed_[Index(i, j)];
  }
  // Writes both (i, j) and (j, i).
  void Set(std::size_t i, std::size_t j, double value) {
    packed_[Index(i, j)] = value;
  }
  void Add(std::size_t i, std::size_t j, double value) {
    packed_[Index(i, j)] += value;
  }

  std::span<const double> packed() const noexcept { return packed_; }

  double Trace() const;
  bool AllFinite() const;
  std::vector<double> ToDense() const;

  SymMat& operator+=(const SymMat& other);
  SymMat& operator-=(const SymMat& other);
  SymMat& operator*=(double s);
  // Adds s to every diagonal entry.
  SymMat& AddDiagonal(double s);

  friend bool operator==(const SymMat&, const SymMat&) = default;

 private:
  std::size_t Index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * (2 * dim_ - i + 1) / 2 + (j - i);
  }

  std::size_t dim_ = 0;
  std::vector<double> packed_;
};

Vec Multiply(const SymMat& m, const Vec& v);

// In-place M += x x^T.
void Rank1UpdateInPlace(SymMat& m, const Vec& x, double weight = 1.0);
// Returns M + x x^T.
SymMat Rank1Update(SymMat m, const Vec& x);

// Lower-triangular factor L with M = L L^T.
class Cholesky {
 public:
  // Throws DegenerateSystemError when a pivot is <= pivot_tol.
  explicit Cholesky(const SymMat& m, double pivot_tol = kPivotTol);

  std::size_t dim() const noexcept { return dim_; }
  Vec Solve(const Vec& v) const;
  // Solves L y = v only; |y|^2 = v^T M^{-1} v.
  Vec SolveLower(const Vec& v) const;

 private:
  std::size_t dim_;
  std::vector<double> lower_;  // row-major dim x dim, upper part unused
};

Vec SpdSolve(const SymMat& m, const Vec& v, double pivot_tol = kPivotTol);

struct EigenDecomposition {
  std::vector<double> values;   // ascending
  std::vector<Vec> vectors;     // vectors[k] pairs with values[k]
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
// tol * ||M||_F.
EigenDecomposition SymEigen(const SymMat& m, double tol = kJacobiTol);
std::vector<double> SymEigenvalues(const SymMat& m, double tol = kJacobiTol);

// Smallest eigenvalue strictly above rank_tol * lambda_max. Throws
// NoDataError when no eigenvalue qualifies (e.g. the zero matrix).
double MinNonzeroEigenvalue(const SymMat& m, double rank_tol = kRankTol);

// Largest absolute eigenvalue, i.e. the spectral norm of a symmetric matrix.
double SpectralNorm(const SymMat& m);

}  // namespace linbandit::linalg

#endif  // LINBANDIT_LINALG_HPP_
