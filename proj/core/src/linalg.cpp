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

#include "linbandit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "linbandit/error.hpp"

namespace linbandit::linalg {
namespace {

void CheckDim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

// -- Vec ----------------------------------------------------------------------

Vec Vec::Basis(std::size_t dim, std::size_t index) {
  Vec v(dim);
  v.data_.at(index) = 1.0;
  return v;
}

bool Vec::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

Vec& Vec::operator+=(const Vec& other) {
  CheckDim(dim(), other.dim(), "Vec::operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& other) {
  CheckDim(dim(), other.dim(), "Vec::operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator*(double s, Vec v) { return v *= s; }

double Dot(const Vec& a, const Vec& b) {
  CheckDim(a.dim(), b.dim(), "Dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double Norm2(const Vec& v) { return std::sqrt(Dot(v, v)); }

double NormInf(const Vec& v) {
  double m = 0.0;
  for (double x : v.values()) m = std::max(m, std::abs(x));
  return m;
}

double Norm1(const Vec& v) {
  double s = 0.0;
  for (double x : v.values()) s += std::abs(x);
  return s;
}

// -- SymMat -------------------------------------------------------------------

SymMat SymMat::Identity(std::size_t dim, double scale) {
  SymMat m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.Set(i, i, scale);
  return m;
}

SymMat SymMat::FromDense(std::size_t dim, std::span<const double> rows) {
  if (rows.size() != dim * dim) {
    throw DimensionError("SymMat::FromDense: expected " +
                         std::to_string(dim * dim) + " entries");
  }
  SymMat m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      if (rows[i * dim + j] != rows[j * dim + i]) {
        throw std::invalid_argument("SymMat::FromDense: input not symmetric");
      }
      m.Set(i, j, rows[i * dim + j]);
    }
  }
  return m;
}

SymMat SymMat::FromPacked(std::size_t dim, std::span<const double> packed) {
  SymMat m(dim);
  if (packed.size() != m.packed_.size()) {
    throw DimensionError("SymMat::FromPacked: expected " +
                         std::to_string(m.packed_.size()) + " entries");
  }
  std::copy(packed.begin(), packed.end(), m.packed_.begin());
  return m;
}

double SymMat::Trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

bool SymMat::AllFinite() const {
  return std::all_of(packed_.begin(), packed_.end(),
                     [](double x) { return std::isfinite(x); });
}

std::vector<double> SymMat::ToDense() const {
  std::vector<double> out(dim_ * dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out[i * dim_ + j] = (*this)(i, j);
  }
  return out;
}

SymMat& SymMat::operator+=(const SymMat& other) {
  CheckDim(dim_, other.dim_, "SymMat::operator+=");
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] += other.packed_[k];
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& other) {
  CheckDim(dim_, other.dim_, "SymMat::operator-=");
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] -= other.packed_[k];
  return *this;
}

SymMat& SymMat::operator*=(double s) {
  for (double& x : packed_) x *= s;
  return *this;
}

SymMat& SymMat::AddDiagonal(double s) {
  for (std::size_t i = 0; i < dim_; ++i) Add(i, i, s);
  return *this;
}

Vec Multiply(const SymMat& m, const Vec& v) {
  CheckDim(m.dim(), v.dim(), "Multiply");
  Vec out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.dim(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

void Rank1UpdateInPlace(SymMat& m, const Vec& x, double weight) {
  CheckDim(m.dim(), x.dim(), "Rank1Update");
  const std::size_t d = m.dim();
  for (std::size_t i = 0; i < d; ++i) {
    const double wi = weight * x[i];
    for (std::size_t j = i; j < d; ++j) m.Add(i, j, wi * x[j]);
  }
}

SymMat Rank1Update(SymMat m, const Vec& x) {
  Rank1UpdateInPlace(m, x);
  return m;
}

// -- Cholesky -----------------------------------------------------------------

Cholesky::Cholesky(const SymMat& m, double pivot_tol)
    : dim_(m.dim()), lower_(m.dim() * m.dim(), 0.0) {
  const std::size_t d = dim_;
  for (std::size_t j = 0; j < d; ++j) {
    double pivot = m(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= lower_[j * d + k] * lower_[j * d + k];
    if (!(pivot > pivot_tol)) {
      throw DegenerateSystemError("Cholesky: pivot " + std::to_string(pivot) +
                                  " at column " + std::to_string(j) +
                                  " is not above tolerance");
    }
    const double ljj = std::sqrt(pivot);
    lower_[j * d + j] = ljj;
    for (std::size_t i = j + 1; i < d; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_[i * d + k] * lower_[j * d + k];
      lower_[i * d + j] = s / ljj;
    }
  }
}

Vec Cholesky::SolveLower(const Vec& v) const {
  CheckDim(dim_, v.dim(), "Cholesky::SolveLower");
  const std::size_t d = dim_;
  Vec y(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = v[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower_[i * d + k] * y[k];
    y[i] = s / lower_[i * d + i];
  }
  return y;
}

Vec Cholesky::Solve(const Vec& v) const {
  Vec y = SolveLower(v);
  const std::size_t d = dim_;
  Vec x(d);
  for (std::size_t ii = d; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < d; ++k) s -= lower_[k * d + ii] * x[k];
    x[ii] = s / lower_[ii * d + ii];
  }
  return x;
}

Vec SpdSolve(const SymMat& m, const Vec& v, double pivot_tol) {
  CheckDim(m.dim(), v.dim(), "SpdSolve");
  return Cholesky(m, pivot_tol).Solve(v);
}

// -- Jacobi eigenvalues -------------------------------------------------------

EigenDecomposition SymEigen(const SymMat& m, double tol) {
  if (!m.AllFinite()) {
    throw std::invalid_argument("SymEigen: non-finite matrix entry");
  }
  const std::size_t d = m.dim();
  std::vector<double> a = m.ToDense();
  std::vector<double> v(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;

  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);
  const double threshold = tol * frob;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) s += 2.0 * a[i * d + j] * a[i * d + j];
    }
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a[p * d + q];
        if (apq == 0.0) continue;
        const double app = a[p * d + p];
        const double aqq = a[q * d + q];
        // Rotation angle that zeroes a[p][q] (Golub & Van Loan, sym.schur2).
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a[k * d + p];
          const double akq = a[k * d + q];
          a[k * d + p] = c * akp - s * akq;
          a[k * d + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a[p * d + k];
          const double aqk = a[q * d + k];
          a[p * d + k] = c * apk - s * aqk;
          a[q * d + k] = s * apk + c * aqk;
        }
        a[p * d + q] = 0.0;
        a[q * d + p] = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = v[k * d + p];
          const double vkq = v[k * d + q];
          v[k * d + p] = c * vkp - s * vkq;
          v[k * d + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i * d + i] < a[j * d + j];
  });

  EigenDecomposition out;
  out.values.reserve(d);
  out.vectors.reserve(d);
  for (std::size_t k : order) {
    out.values.push_back(a[k * d + k]);
    Vec col(d);
    for (std::size_t i = 0; i < d; ++i) col[i] = v[i * d + k];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

std::vector<double> SymEigenvalues(const SymMat& m, double tol) {
  return SymEigen(m, tol).values;
}

double MinNonzeroEigenvalue(const SymMat& m, double rank_tol) {
  if (!(rank_tol > 0.0 && rank_tol < 1.0)) {
    throw std::invalid_argument("MinNonzeroEigenvalue: rank_tol must be in (0,1)");
  }
  const std::vector<double> values = SymEigenvalues(m);
  if (values.empty() || !(values.back() > 0.0)) {
    throw NoDataError("MinNonzeroEigenvalue: matrix has no positive eigenvalue");
  }
  const double cutoff = rank_tol * values.back();
  for (double lambda : values) {
    if (lambda > cutoff) return lambda;
  }
  throw NoDataError("MinNonzeroEigenvalue: no eigenvalue above tolerance");
}

double SpectralNorm(const SymMat& m) {
  const std::vector<double> values = SymEigenvalues(m);
  if (values.empty()) return 0.0;
  return std::max(std::abs(values.front()), std::abs(values.back()));
}

}  // namespace linbandit::linalg
