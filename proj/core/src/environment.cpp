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

#include "linbandit/environment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "linbandit/error.hpp"

namespace linbandit::environment {
namespace {

constexpr double kNormSlack = 1e-12;

void CheckPoint(const Vec& x, std::size_t dim, bool unit_norm, const char* what) {
  if (x.dim() != dim) {
    throw std::invalid_argument(std::string(what) + ": point has dimension " +
                                std::to_string(x.dim()) + ", expected " +
                                std::to_string(dim));
  }
  if (!x.AllFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite point");
  }
  if (unit_norm && linalg::Norm2(x) > 1.0 + kNormSlack) {
    throw std::invalid_argument(std::string(what) +
                                ": point exceeds unit norm (set "
                                "unit_norm_enforced = false to allow)");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

TwoContext TwoContextCube(double inverse_rate) {
  return TwoContext{inverse_rate, Vec{1.0, 1.0, 1.0}, Vec{1.0, 0.0, 1.0}};
}

TwoContext TwoContextPlanar(double inverse_rate) {
  return TwoContext{inverse_rate, Vec{1.0, 1.0}, Vec{1.0, 0.0}};
}

void EnvironmentSpec::Validate() const {
  if (dim < 1) throw std::invalid_argument("environment: d must be >= 1");
  if (num_arms < 1) throw std::invalid_argument("environment: K must be >= 1");
  if (thetas.size() != num_arms) {
    throw std::invalid_argument("environment: expected " +
                                std::to_string(num_arms) + " thetas, got " +
                                std::to_string(thetas.size()));
  }
  for (const Vec& theta : thetas) {
    if (theta.dim() != dim || !theta.AllFinite()) {
      throw std::invalid_argument("environment: malformed theta");
    }
    if (linalg::Norm2(theta) > 1.0 + kNormSlack) {
      throw std::invalid_argument("environment: |theta_a| exceeds 1");
    }
  }
  std::visit(
      Overloaded{
          [&](const BernoulliNormalized& b) {
            if (!(b.q > 0.0 && b.q <= 1.0)) {
              throw std::invalid_argument("environment: Bernoulli q must be in (0,1]");
            }
          },
          [&](const FiniteSupport& f) {
            if (f.points.empty() || f.points.size() != f.probs.size()) {
              throw std::invalid_argument(
                  "environment: finite support needs one probability per point");
            }
            double total = 0.0;
            for (std::size_t i = 0; i < f.points.size(); ++i) {
              CheckPoint(f.points[i], dim, unit_norm_enforced, "finite support");
              if (!(f.probs[i] >= 0.0)) {
                throw std::invalid_argument("environment: negative probability");
              }
              total += f.probs[i];
            }
            if (std::abs(total - 1.0) > 1e-9) {
              throw std::invalid_argument("environment: probabilities sum to " +
                                          std::to_string(total));
            }
          },
          [&](const TwoContext& c) {
            if (!(c.inverse_rate >= 1.0) || !std::isfinite(c.inverse_rate)) {
              throw std::invalid_argument("environment: two-context I must be >= 1");
            }
            CheckPoint(c.x_rare, dim, unit_norm_enforced, "two-context");
            CheckPoint(c.x_common, dim, unit_norm_enforced, "two-context");
          },
      },
      contexts);
  std::visit(Overloaded{
                 [](const UniformScaled&) {},
                 [](const AdditiveNoise& n) {
                   if (!(n.scale >= 0.0) || !std::isfinite(n.scale)) {
                     throw std::invalid_argument("environment: bad noise scale");
                   }
                 },
                 [](const EntryFluctuation& f) {
                   if (!(f.bound >= 0.0) || !std::isfinite(f.bound)) {
                     throw std::invalid_argument("environment: bad fluctuation bound");
                   }
                 },
             },
             rewards);
}

Vec SampleContext(const EnvironmentSpec& spec, Rng& rng) {
  return std::visit(
      Overloaded{
          [&](const BernoulliNormalized& b) {
            Vec x(spec.dim);
            std::size_t ones = 0;
            while (ones == 0) {
              for (std::size_t i = 0; i < spec.dim; ++i) {
                const bool bit = Uniform01(rng) < b.q;
                x[i] = bit ? 1.0 : 0.0;
                ones += bit ? 1 : 0;
              }
            }
            x *= 1.0 / std::sqrt(static_cast<double>(ones));
            return x;
          },
          [&](const FiniteSupport& f) {
            const double u = Uniform01(rng);
            double cumulative = 0.0;
            for (std::size_t i = 0; i < f.points.size(); ++i) {
              cumulative += f.probs[i];
              if (u < cumulative) return f.points[i];
            }
            return f.points.back();
          },
          [&](const TwoContext& c) {
            return Uniform01(rng) < 1.0 / c.inverse_rate ? c.x_rare : c.x_common;
          },
      },
      spec.contexts);
}

double SampleReward(const EnvironmentSpec& spec, ArmIndex arm, const Vec& x,
                    Rng& rng) {
  if (arm < 1 || arm > spec.num_arms) {
    throw std::out_of_range("SampleReward: arm " + std::to_string(arm) +
                            " out of range");
  }
  const Vec& theta = spec.thetas[arm - 1];
  const double mean = linalg::Dot(x, theta);
  return std::visit(
      Overloaded{
          [&](const UniformScaled&) {
            const double lo = std::min(0.0, 2.0 * mean);
            const double hi = std::max(0.0, 2.0 * mean);
            return lo + (hi - lo) * Uniform01(rng);
          },
          [&](const AdditiveNoise& n) {
            double e = 0.0;
            switch (n.kind) {
              case NoiseKind::kGaussian:
                e = std::normal_distribution<double>(0.0, 1.0)(rng);
                break;
              case NoiseKind::kUniform:
                e = 2.0 * Uniform01(rng) - 1.0;
                break;
              case NoiseKind::kRademacher:
                e = (rng() & 1) ? 1.0 : -1.0;
                break;
            }
            return mean + n.scale * e;
          },
          [&](const EntryFluctuation& f) {
            double r = 0.0;
            for (std::size_t i = 0; i < x.dim(); ++i) {
              const double jitter = f.bound * (2.0 * Uniform01(rng) - 1.0);
              r += x[i] * (theta[i] + jitter);
            }
            return r;
          },
      },
      spec.rewards);
}

ArmIndex BestArm(const Vec& x, std::span<const Vec> thetas) {
  if (thetas.empty()) throw std::invalid_argument("BestArm: no arms");
  ArmIndex best = 1;
  double best_value = linalg::Dot(x, thetas[0]);
  for (std::size_t a = 1; a < thetas.size(); ++a) {
    const double v = linalg::Dot(x, thetas[a]);
    if (v > best_value) {
      best_value = v;
      best = a + 1;
    }
  }
  return best;
}

double StepRegret(const Vec& x, ArmIndex arm, std::span<const Vec> thetas) {
  if (arm < 1 || arm > thetas.size()) {
    throw std::out_of_range("StepRegret: arm out of range");
  }
  const ArmIndex best = BestArm(x, thetas);
  if (best == arm) return 0.0;
  return linalg::Dot(x, thetas[best - 1]) - linalg::Dot(x, thetas[arm - 1]);
}

double DeltaMax(std::span<const Vec> thetas) {
  double out = 0.0;
  for (std::size_t a = 0; a < thetas.size(); ++a) {
    for (std::size_t b = a + 1; b < thetas.size(); ++b) {
      out = std::max(out, linalg::Norm2(thetas[a] - thetas[b]));
    }
  }
  return out;
}

double MaxThetaNorm(std::span<const Vec> thetas) {
  double out = 0.0;
  for (const Vec& theta : thetas) out = std::max(out, linalg::Norm2(theta));
  return out;
}

Gaps ExactGaps(std::span<const Vec> thetas, std::span<const Vec> support) {
  if (support.size() > kMaxEnumerableSupport) {
    throw std::invalid_argument("ExactGaps: support of " +
                                std::to_string(support.size()) +
                                " points is too large to enumerate");
  }
  Gaps gaps;
  gaps.delta_max = DeltaMax(thetas);
  double delta_min = std::numeric_limits<double>::infinity();
  std::vector<double> values(thetas.size());
  for (const Vec& x : support) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < thetas.size(); ++a) {
      values[a] = linalg::Dot(x, thetas[a]);
      best = std::max(best, values[a]);
    }
    for (double v : values) {
      if (v < best) delta_min = std::min(delta_min, best - v);
    }
  }
  if (!std::isfinite(delta_min)) {
    throw DegenerateInstanceError(
        "ExactGaps: no context has a strictly suboptimal arm");
  }
  gaps.delta_min = delta_min;
  return gaps;
}

WeightedSupport EnumerateSupport(const EnvironmentSpec& spec) {
  return std::visit(
      Overloaded{
          [&](const BernoulliNormalized& b) {
            if (spec.dim >= 64 ||
                (std::uint64_t{1} << spec.dim) - 1 > kMaxEnumerableSupport) {
              throw std::invalid_argument(
                  "EnumerateSupport: Bernoulli support too large for d = " +
                  std::to_string(spec.dim));
            }
            WeightedSupport out;
            const std::uint64_t end = std::uint64_t{1} << spec.dim;
            const double nonzero =
                1.0 - std::pow(1.0 - b.q, static_cast<double>(spec.dim));
            for (std::uint64_t mask = 1; mask < end; ++mask) {
              const int ones = std::popcount(mask);
              Vec x(spec.dim);
              const double entry = 1.0 / std::sqrt(static_cast<double>(ones));
              for (std::size_t i = 0; i < spec.dim; ++i) {
                if (mask & (std::uint64_t{1} << i)) x[i] = entry;
              }
              const double prob =
                  std::pow(b.q, ones) *
                  std::pow(1.0 - b.q, static_cast<double>(spec.dim) - ones) /
                  nonzero;
              if (prob > 0.0) {
                out.points.push_back(std::move(x));
                out.probs.push_back(prob);
              }
            }
            return out;
          },
          [&](const FiniteSupport& f) {
            return WeightedSupport{f.points, f.probs};
          },
          [&](const TwoContext& c) {
            const double rare = 1.0 / c.inverse_rate;
            if (rare == 1.0) return WeightedSupport{{c.x_rare}, {1.0}};
            return WeightedSupport{{c.x_rare, c.x_common}, {rare, 1.0 - rare}};
          },
      },
      spec.contexts);
}

SymMat ExactCovariance(const EnvironmentSpec& spec) {
  const WeightedSupport support = EnumerateSupport(spec);
  SymMat sigma(spec.dim);
  for (std::size_t i = 0; i < support.points.size(); ++i) {
    linalg::Rank1UpdateInPlace(sigma, support.points[i], support.probs[i]);
  }
  return sigma;
}

double ExactSigmaMin(const EnvironmentSpec& spec, double rank_tol) {
  return linalg::MinNonzeroEigenvalue(ExactCovariance(spec), rank_tol);
}

ThetaDraw GaussianThetas(std::size_t dim, std::size_t num_arms, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ThetaDraw draw;
  draw.thetas.reserve(num_arms);
  for (std::size_t a = 0; a < num_arms; ++a) {
    Vec theta(dim);
    for (std::size_t i = 0; i < dim; ++i) theta[i] = normal(rng);
    draw.thetas.push_back(std::move(theta));
  }
  const double q = MaxThetaNorm(draw.thetas);
  if (q > 1.0) {
    for (Vec& theta : draw.thetas) theta *= 1.0 / q;
    draw.scale = q;
  }
  return draw;
}

// -- RegretLedger -------------------------------------------------------------

RegretLedger::RegretLedger(std::size_t num_arms, std::size_t horizon_hint)
    : pulls_(num_arms, 0) {
  cumulative_.reserve(horizon_hint);
}

void RegretLedger::Accrue(std::uint64_t t, const Vec& x,
                          const policy::Action& action,
                          std::span<const Vec> thetas) {
  if (t != cumulative_.size() + 1) {
    throw std::logic_error("RegretLedger: step " + std::to_string(t) +
                           " accrued after step " +
                           std::to_string(cumulative_.size()));
  }
  const double increment = StepRegret(x, action.arm, thetas);
  cumulative_.push_back(total() + increment);
  ++pulls_.at(action.arm - 1);
  switch (action.mode) {
    case policy::Mode::kWarmup:
      ++warmup_;
      break;
    case policy::Mode::kExplore:
      ++explore_;
      break;
    case policy::Mode::kExploit:
      ++exploit_;
      break;
  }
}

}  // namespace linbandit::environment
