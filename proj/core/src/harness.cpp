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

#include "linbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "linbandit/random.hpp"

#ifndef LINBANDIT_VERSION
#define LINBANDIT_VERSION "0.1.0"
#endif

namespace linbandit::harness {
namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Per-replication values sampled on the output grid.
struct GridSamples {
  std::vector<double> regret;
  std::vector<double> recorded;
};

GridSamples SampleOnGrid(const RegretTrace& trace,
                         std::span<const std::uint64_t> grid) {
  GridSamples s;
  s.regret.reserve(grid.size());
  s.recorded.reserve(grid.size());
  for (std::uint64_t t : grid) {
    if (t < 1 || t > trace.cumulative.size()) {
      throw std::out_of_range("grid time " + std::to_string(t) +
                              " outside the trace");
    }
    s.regret.push_back(trace.cumulative[t - 1]);
    s.recorded.push_back(static_cast<double>(trace.recorded[t - 1]));
  }
  return s;
}

AggregateTrace Reduce(std::span<const GridSamples> samples,
                      std::span<const std::uint64_t> grid) {
  AggregateTrace out;
  out.t.assign(grid.begin(), grid.end());
  out.reps = samples.size();
  const std::size_t rows = grid.size();
  const double reps = static_cast<double>(samples.size());
  out.mean_regret.assign(rows, 0.0);
  out.std_regret.assign(rows, 0.0);
  out.explore_count_mean.assign(rows, 0.0);
  out.exploit_count_mean.assign(rows, 0.0);
  for (std::size_t k = 0; k < rows; ++k) {
    double sum = 0.0;
    double recorded = 0.0;
    for (const GridSamples& s : samples) {
      sum += s.regret[k];
      recorded += s.recorded[k];
    }
    const double mean = sum / reps;
    double ss = 0.0;
    for (const GridSamples& s : samples) {
      ss += (s.regret[k] - mean) * (s.regret[k] - mean);
    }
    out.mean_regret[k] = mean;
    out.std_regret[k] = samples.size() > 1 ? std::sqrt(ss / (reps - 1.0)) : 0.0;
    out.explore_count_mean[k] = recorded / reps;
    out.exploit_count_mean[k] =
        static_cast<double>(grid[k]) - out.explore_count_mean[k];
  }
  return out;
}

}  // namespace

std::string_view PolicyKindName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kEpsGreedy:
      return "eps";
    case PolicyKind::kUcb:
      return "ucb";
    case PolicyKind::kUniform:
      return "uniform";
  }
  return "unknown";
}

std::uint64_t RunConfig::EffectiveP() const {
  return policy.p != 0 ? policy.p : 32 * environment.num_arms;
}

void RunConfig::Validate() const {
  try {
    environment.Validate();
    if (run.horizon < 1) throw std::invalid_argument("T must be >= 1");
    if (run.reps < 1) throw std::invalid_argument("reps must be >= 1");
    if (run.horizon > std::numeric_limits<std::uint32_t>::max()) {
      throw std::invalid_argument("T exceeds the supported horizon");
    }
    if (!(run.C > 0.0) || !(run.C_abs > 0.0)) {
      throw std::invalid_argument("C and C_abs must be positive");
    }
    switch (policy.kind) {
      case PolicyKind::kEpsGreedy:
        policy::EpsGreedyConfig{environment.num_arms, environment.dim,
                                EffectiveP(), 0, true, true}
            .Validate();
        break;
      case PolicyKind::kUcb:
        policy::UcbConfig{environment.num_arms, environment.dim, EffectiveP(),
                          policy.history_cap}
            .Validate();
        break;
      case PolicyKind::kUniform:
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

RegretTrace RunOne(const RunConfig& config, std::uint64_t seed,
                   const RunOptions& options) {
  config.Validate();
  const EnvironmentSpec& env = config.environment;
  const std::uint64_t horizon = config.run.horizon;
  Rng env_rng = MakeRng(seed, Stream::kEnvironment);
  Rng policy_rng = MakeRng(seed, Stream::kPolicy);

  std::optional<policy::EpsGreedyPolicy> eps;
  std::optional<policy::UcbPolicy> ucb;
  switch (config.policy.kind) {
    case PolicyKind::kEpsGreedy:
      eps.emplace(policy::EpsGreedyConfig{
          env.num_arms, env.dim, config.EffectiveP(), seed,
          env.unit_norm_enforced, config.policy.cache_estimates});
      break;
    case PolicyKind::kUcb:
      ucb.emplace(policy::UcbConfig{env.num_arms, env.dim, config.EffectiveP(),
                                    config.policy.history_cap});
      break;
    case PolicyKind::kUniform:
      break;
  }

  std::vector<std::uint64_t> checkpoints = config.run.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());

  RegretTrace trace;
  trace.seed = seed;
  trace.recorded.reserve(horizon);
  if (options.collect_calibration) trace.calibration.emplace_back(env.dim);
  if (options.record_actions) trace.actions.reserve(horizon);
  environment::RegretLedger ledger(env.num_arms, horizon);
  std::uint32_t recorded = 0;

  for (std::uint64_t t = 1; t <= horizon; ++t) {
    policy::Action action;
    linalg::Vec x;
    double reward = 0.0;
    try {
      x = environment::SampleContext(env, env_rng);
      if (eps) {
        action = eps->Step(x, policy_rng);
      } else if (ucb) {
        action = ucb->Step(x);
      } else {
        action = policy::UniformPolicyStep(env.num_arms, policy_rng, t);
        action.coin_probability = 1.0;
      }
      reward = environment::SampleReward(env, action.arm, x, env_rng);
      if (eps) eps->Feed(action, x, reward);
      if (ucb) ucb->Feed(action, x, reward);
      ledger.Accrue(t, x, action, env.thetas);
    } catch (const RunError&) {
      throw;
    } catch (const std::exception& e) {
      throw RunError(t, e.what());
    }

    if (action.mode != policy::Mode::kExploit) ++recorded;
    trace.recorded.push_back(recorded);
    if (options.collect_calibration) {
      CalibrationObservations& obs = trace.calibration.front();
      obs.contexts.Add(x);
      if (eps && action.margin) obs.margins.Observe(*action.margin);
      obs.rewards.Add(action.arm, x, reward);
    }
    if (options.record_actions) {
      trace.actions.push_back(
          ActionRecord{t, action.mode, action.arm, action.coin_probability});
    }
    if (eps && std::binary_search(checkpoints.begin(), checkpoints.end(), t)) {
      std::vector<std::vector<double>>& snaps = trace.snapshots[t];
      for (const estimator::ArmState& s : eps->arms()) snaps.push_back(s.Snapshot());
    }
  }

  trace.cumulative = ledger.cumulative();
  trace.per_arm_pulls = ledger.per_arm_pulls();
  trace.warmup = ledger.warmup_count();
  trace.explore = ledger.explore_count();
  trace.exploit = ledger.exploit_count();
  return trace;
}

std::vector<std::uint64_t> LogGrid(std::uint64_t horizon,
                                   std::uint64_t log_every) {
  std::vector<std::uint64_t> grid;
  if (horizon == 0) return grid;
  if (log_every == 0 && horizon <= kDenseLogLimit) log_every = 1;
  if (log_every > 0) {
    grid.reserve(horizon / log_every + 1);
    for (std::uint64_t t = log_every; t <= horizon; t += log_every) grid.push_back(t);
  } else {
    for (std::uint64_t t = 1; t < horizon;) {
      grid.push_back(t);
      const auto next = static_cast<std::uint64_t>(
          std::floor(static_cast<double>(t) * kGeometricLogRatio));
      t = std::max(t + 1, next);
    }
  }
  if (grid.empty() || grid.back() != horizon) grid.push_back(horizon);
  return grid;
}

AggregateTrace Aggregate(std::span<const RegretTrace> traces,
                         std::span<const std::uint64_t> grid) {
  if (traces.empty()) throw std::invalid_argument("Aggregate: no traces");
  std::vector<GridSamples> samples;
  samples.reserve(traces.size());
  AggregateTrace out;
  for (const RegretTrace& trace : traces) samples.push_back(SampleOnGrid(trace, grid));
  out = Reduce(samples, grid);
  for (const RegretTrace& trace : traces) {
    out.final_regret.push_back(trace.cumulative.empty() ? 0.0 : trace.cumulative.back());
    out.final_explore.push_back(trace.recorded.empty() ? 0.0 : trace.recorded.back());
  }
  return out;
}

std::size_t ReplicationThreads() {
  std::size_t requested = 0;
  if (const char* env = std::getenv("LINBANDIT_THREADS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') requested = static_cast<std::size_t>(v);
  }
  if (requested == 0) {
    requested = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  return requested;
}

Replication ReplicateDetailed(const RunConfig& config, bool record_actions) {
  config.Validate();
  const std::uint64_t reps = config.run.reps;
  const std::vector<std::uint64_t> grid =
      LogGrid(config.run.horizon, config.run.log_every);

  std::vector<GridSamples> samples(reps);
  std::vector<double> final_regret(reps);
  std::vector<double> final_explore(reps);
  std::vector<std::exception_ptr> errors(reps);
  Replication result;

  auto run_rep = [&](std::uint64_t i) {
    try {
      RunOptions options;
      options.collect_calibration = i == 0;
      options.record_actions = record_actions && i == 0;
      RegretTrace trace = RunOne(config, config.run.base_seed + i, options);
      samples[i] = SampleOnGrid(trace, grid);
      final_regret[i] = trace.cumulative.back();
      final_explore[i] = trace.recorded.back();
      if (i == 0) result.first = std::move(trace);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t threads =
      std::min<std::size_t>(ReplicationThreads(), static_cast<std::size_t>(reps));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < reps; ++i) run_rep(i);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t i = next++; i < reps; i = next++) run_rep(i);
      });
    }
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  result.aggregate = Reduce(samples, grid);
  result.aggregate.final_regret = std::move(final_regret);
  result.aggregate.final_explore = std::move(final_explore);
  return result;
}

AggregateTrace Replicate(const RunConfig& config) {
  return ReplicateDetailed(config).aggregate;
}

LogFit FitLog(std::span<const std::uint64_t> t, std::span<const double> regret,
              double tail_fraction) {
  if (t.size() != regret.size() || t.empty()) {
    throw std::invalid_argument("FitLog: mismatched or empty series");
  }
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw std::invalid_argument("FitLog: tail fraction must be in (0,1]");
  }
  const double t_max = static_cast<double>(t.back());
  const double start = (1.0 - tail_fraction) * t_max;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (static_cast<double>(t[k]) >= start) {
      xs.push_back(std::log(static_cast<double>(t[k])));
      ys.push_back(regret[k]);
    }
  }
  if (xs.size() < 10) {
    throw std::invalid_argument("FitLog: tail has " + std::to_string(xs.size()) +
                                " points, need at least 10");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("FitLog: degenerate tail (constant t)");
  LogFit fit;
  fit.points = xs.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (fit.intercept + fit.slope * xs[k]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

LogFit FitLog(const AggregateTrace& trace, double tail_fraction) {
  return FitLog(trace.t, trace.mean_regret, tail_fraction);
}

void WriteCsv(const AggregateTrace& trace, std::ostream& out,
              const HeaderBlock& header) {
  for (const auto& [key, value] : header) out << "# " << key << '=' << value << '\n';
  out << kCsvColumns << '\n';
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    out << trace.t[k] << ',' << Num(trace.mean_regret[k]) << ','
        << Num(trace.std_regret[k]) << ',' << Num(trace.explore_count_mean[k])
        << ',' << Num(trace.exploit_count_mean[k]) << '\n';
  }
}

void WriteCsv(const AggregateTrace& trace, const std::string& path,
              const HeaderBlock& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  WriteCsv(trace, out, header);
  if (!out) throw Error("failed writing " + path);
}

void WriteActionLog(std::span<const ActionRecord> actions, std::ostream& out) {
  out << "t,mode,arm,coin_probability\n";
  for (const ActionRecord& a : actions) {
    out << a.t << ',' << policy::ModeName(a.mode) << ',' << a.arm << ','
        << Num(a.coin_probability) << '\n';
  }
}

HeaderBlock DescribeRun(const RunConfig& config, const Replication& result) {
  const EnvironmentSpec& env = config.environment;
  const std::uint64_t p = config.EffectiveP();
  HeaderBlock h;
  h.emplace_back("version", VersionString());
  h.emplace_back("seed", std::to_string(config.run.base_seed));
  h.emplace_back("reps", std::to_string(config.run.reps));
  h.emplace_back("T", std::to_string(config.run.horizon));
  h.emplace_back("policy", std::string(PolicyKindName(config.policy.kind)));
  h.emplace_back("p", std::to_string(p));
  h.emplace_back("d", std::to_string(env.dim));
  h.emplace_back("K", std::to_string(env.num_arms));
  h.emplace_back("theta_scale", Num(config.theta_scale));

  const double delta_max = environment::DeltaMax(env.thetas);
  const double q = environment::MaxThetaNorm(env.thetas);
  h.emplace_back("delta_max", Num(delta_max));
  h.emplace_back("Q", Num(q));

  // Exact instance quantities when the context support can be enumerated.
  try {
    const environment::WeightedSupport support = environment::EnumerateSupport(env);
    const double sigma_min = environment::ExactSigmaMin(env);
    h.emplace_back("sigma_min_exact", Num(sigma_min));
    const environment::Gaps gaps = environment::ExactGaps(env.thetas, support.points);
    h.emplace_back("delta_min_exact", Num(gaps.delta_min));
    const std::uint64_t p_thm = calibration::PTheoremBound(
        env.num_arms, 1.0, gaps.delta_min, sigma_min, config.run.C);
    const std::uint64_t p_strict = calibration::PStrictBound(
        env.num_arms, 1.0, gaps.delta_min, sigma_min, config.run.C_abs);
    h.emplace_back("p_theorem_exact_L1", std::to_string(p_thm));
    h.emplace_back("p_strict_exact_L1", std::to_string(p_strict));
    h.emplace_back("p_satisfies_theorem_exact", p >= p_thm ? "yes" : "no");
    h.emplace_back("p_satisfies_strict_exact", p >= p_strict ? "yes" : "no");
  } catch (const std::exception& e) {
    h.emplace_back("exact_oracles", std::string("unavailable: ") + e.what());
  }
  h.emplace_back("p_satisfies_32K", p >= 32 * env.num_arms ? "yes" : "no");
  h.emplace_back("regret_bound",
                 Num(calibration::RegretUpperBound(p, delta_max, env.dim,
                                                   env.num_arms, q,
                                                   config.run.horizon)));

  // Online estimates from replication 0.
  if (!result.first.calibration.empty()) {
    const CalibrationObservations& obs = result.first.calibration.front();
    std::optional<double> sigma;
    std::optional<double> delta;
    std::optional<double> L;
    try {
      sigma = obs.contexts.SigmaMin();
    } catch (const std::exception&) {
    }
    try {
      delta = obs.margins.value();
    } catch (const std::exception&) {
    }
    try {
      L = obs.rewards.EstimateL();
    } catch (const std::exception&) {
    }
    if (sigma && delta && L) {
      calibration::CalibrationReport report = calibration::MakeReport(
          env.num_arms, *sigma, *delta, *L, config.run.C, config.run.C_abs);
      report.context_samples = obs.contexts.count();
      report.exploit_samples = obs.margins.observed();
      report.reward_groups = obs.rewards.eligible_groups();
      for (auto& kv : report.ToKeyValues()) h.push_back(std::move(kv));
    } else {
      h.emplace_back("sigma_min_hat", sigma ? Num(*sigma) : "nan");
      h.emplace_back("delta_min_hat", delta ? Num(*delta) : "nan");
      h.emplace_back("L_hat", L ? Num(*L) : "nan");
    }
  }
  double mean_final = 0.0;
  for (double r : result.aggregate.final_regret) mean_final += r;
  if (!result.aggregate.final_regret.empty()) {
    mean_final /= static_cast<double>(result.aggregate.final_regret.size());
  }
  h.emplace_back("mean_final_regret", Num(mean_final));
  return h;
}

std::string VersionString() { return LINBANDIT_VERSION; }

}  // namespace linbandit::harness
