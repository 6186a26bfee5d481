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

#include "linbandit/estimator.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "linbandit/error.hpp"

namespace linbandit::estimator {

double Predict(const Estimate& e, const Vec& x) {
  return linalg::Dot(x, e.theta_hat);
}

ArmState ArmState::FromSnapshot(std::span<const double> snapshot) {
  if (snapshot.size() < 2) {
    throw std::invalid_argument("ArmState snapshot too short");
  }
  const double d_raw = snapshot[0];
  const double n_raw = snapshot[1];
  if (!(d_raw >= 1.0) || d_raw != std::floor(d_raw) || !(n_raw >= 0.0) ||
      n_raw != std::floor(n_raw)) {
    throw std::invalid_argument("ArmState snapshot: bad header");
  }
  const auto d = static_cast<std::size_t>(d_raw);
  const std::size_t packed = d * (d + 1) / 2;
  if (snapshot.size() != 2 + packed + d) {
    throw DimensionError("ArmState snapshot: expected " +
                         std::to_string(2 + packed + d) + " values, got " +
                         std::to_string(snapshot.size()));
  }
  ArmState s;
  s.n_ = static_cast<std::uint64_t>(n_raw);
  s.gram_ = SymMat::FromPacked(d, snapshot.subspan(2, packed));
  s.moment_ = Vec(snapshot.subspan(2 + packed, d));
  return s;
}

void ArmState::Record(const Vec& x, double reward, bool check_norm) {
  if (x.dim() != dim()) {
    throw DimensionError("ArmState::Record: context has dimension " +
                         std::to_string(x.dim()) + ", expected " +
                         std::to_string(dim()));
  }
  if (!std::isfinite(reward)) {
    throw std::invalid_argument("ArmState::Record: non-finite reward");
  }
  if (!x.AllFinite()) {
    throw std::invalid_argument("ArmState::Record: non-finite context");
  }
  if (check_norm && linalg::Norm2(x) > 1.0 + kContextNormSlack) {
    throw std::invalid_argument("ArmState::Record: context norm exceeds 1");
  }
  linalg::Rank1UpdateInPlace(gram_, x);
  for (std::size_t i = 0; i < dim(); ++i) moment_[i] += reward * x[i];
  ++n_;
  cached_.reset();
}

SymMat ArmState::RegularizedGram() const {
  SymMat m = gram_;
  m *= 1.0 / static_cast<double>(n_);
  m.AddDiagonal(RidgeLambda(n_));
  return m;
}

Estimate ArmState::RidgeSolve(bool use_cache) const {
  if (n_ == 0) throw NoDataError("ArmState::RidgeSolve: no recorded samples");
  if (use_cache && cached_) return Estimate{*cached_, n_};
  Vec rhs = moment_;
  rhs *= 1.0 / static_cast<double>(n_);
  Vec theta = linalg::SpdSolve(RegularizedGram(), rhs);
  cached_ = theta;
  return Estimate{std::move(theta), n_};
}

double ArmState::ConfidenceWidth(const Vec& x) const {
  if (n_ == 0) {
    throw NoDataError("ArmState::ConfidenceWidth: no recorded samples");
  }
  if (x.dim() != dim()) {
    throw DimensionError("ArmState::ConfidenceWidth: dimension mismatch");
  }
  const Vec w = linalg::SpdSolve(RegularizedGram(), x);
  return linalg::Norm2(w);
}

std::vector<double> ArmState::Snapshot() const {
  std::vector<double> out;
  out.reserve(2 + gram_.packed().size() + dim());
  out.push_back(static_cast<double>(dim()));
  out.push_back(static_cast<double>(n_));
  out.insert(out.end(), gram_.packed().begin(), gram_.packed().end());
  out.insert(out.end(), moment_.values().begin(), moment_.values().end());
  return out;
}

std::string ArmState::SnapshotString() const {
  std::string out;
  char buf[32];
  for (double v : Snapshot()) {
    if (!out.empty()) out += ' ';
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
  }
  return out;
}

}  // namespace linbandit::estimator
