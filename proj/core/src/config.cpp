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

#include "linbandit/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "linbandit/calibration.hpp"
#include "linbandit/error.hpp"
#include "linbandit/random.hpp"

namespace linbandit::config {
namespace {

using environment::EnvironmentSpec;
using linalg::Vec;

const std::map<std::string, std::set<std::string>>& KnownKeys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"environment",
       {"d", "K", "contexts", "q", "points", "probs", "I", "x_rare",
        "x_common", "unit_norm_enforced", "thetas", "theta_seed", "theta",
        "theta_scale", "rewards", "noise_scale", "fluctuation"}},
      {"policy", {"kind", "p", "history_cap", "cache_estimates"}},
      {"run",
       {"T", "reps", "seed", "out", "log_every", "checkpoints", "C", "C_abs"}},
  };
  return keys;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

using Section = std::map<std::string, Entry>;

std::string Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Section> sections)
      : sections_(std::move(sections)) {}

  const Entry* Find(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  }

  const Entry& Require(const std::string& section, const std::string& key) const {
    const Entry* e = Find(section, key);
    if (!e) throw ConfigError("missing key '" + key + "' in [" + section + "]");
    return *e;
  }

  static std::uint64_t Uint(const Entry& e, const std::string& key) {
    const std::string& v = e.value;
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'",
                        e.line);
    }
    errno = 0;
    const unsigned long long out = std::strtoull(v.c_str(), nullptr, 10);
    if (errno == ERANGE) throw ConfigError("'" + key + "' out of range", e.line);
    return out;
  }

  static double Real(const Entry& e, const std::string& key) {
    return ParseReal(e.value, key, e.line);
  }

  static double ParseReal(const std::string& v, const std::string& key,
                          std::size_t line) {
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out)) {
      throw ConfigError("'" + key + "' expects a finite number, got '" + v + "'",
                        line);
    }
    return out;
  }

  static bool Bool(const Entry& e, const std::string& key) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ConfigError("'" + key + "' expects true or false", e.line);
  }

  static std::vector<double> Reals(const std::string& text, const std::string& key,
                                   std::size_t line) {
    std::string normalized = text;
    for (char& c : normalized) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(normalized);
    std::vector<double> out;
    std::string token;
    while (in >> token) out.push_back(ParseReal(token, key, line));
    return out;
  }

  // Vectors separated by ';', entries by ',' or whitespace.
  static std::vector<Vec> Vectors(const Entry& e, const std::string& key) {
    std::vector<Vec> out;
    std::size_t start = 0;
    while (start <= e.value.size()) {
      const std::size_t stop = std::min(e.value.find(';', start), e.value.size());
      const std::string part = Trim(std::string_view(e.value).substr(start, stop - start));
      if (!part.empty()) out.emplace_back(Reals(part, key, e.line));
      start = stop + 1;
    }
    if (out.empty()) throw ConfigError("'" + key + "' is empty", e.line);
    return out;
  }

 private:
  std::map<std::string, Section> sections_;
};

std::map<std::string, Section> Tokenize(std::string_view text) {
  std::map<std::string, Section> sections;
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    ++line_no;
    std::string_view raw = text.substr(pos, eol - pos);
    raw = raw.substr(0, raw.find('#'));  // no value contains '#'
    const std::string line = Trim(raw);
    pos = eol + 1;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      current = Trim(std::string_view(line).substr(1, line.size() - 2));
      if (!KnownKeys().contains(current)) {
        throw ConfigError("unknown section [" + current + "]", line_no);
      }
      sections[current];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
    }
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    const std::string value = Trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (current.empty()) {
      throw ConfigError("key '" + key + "' appears before any section", line_no);
    }
    if (!KnownKeys().at(current).contains(key)) {
      throw ConfigError("unknown key '" + key + "' in [" + current + "]", line_no);
    }
    auto [it, inserted] = sections[current].emplace(key, Entry{value, line_no});
    if (!inserted) {
      throw ConfigError("duplicate key '" + key + "' (first set on line " +
                            std::to_string(it->second.line) + ")",
                        line_no);
    }
  }
  return sections;
}

EnvironmentSpec BuildEnvironment(const Reader& r, std::uint64_t default_theta_seed,
                                 double& theta_scale) {
  EnvironmentSpec env;
  env.dim = Reader::Uint(r.Require("environment", "d"), "d");
  env.num_arms = Reader::Uint(r.Require("environment", "K"), "K");
  if (env.dim == 0 || env.num_arms == 0) throw ConfigError("d and K must be >= 1");
  if (const Entry* e = r.Find("environment", "unit_norm_enforced")) {
    env.unit_norm_enforced = Reader::Bool(*e, "unit_norm_enforced");
  }

  const Entry* contexts = r.Find("environment", "contexts");
  const std::string kind = contexts ? contexts->value : "bernoulli";
  if (kind == "bernoulli") {
    environment::BernoulliNormalized b;
    if (const Entry* e = r.Find("environment", "q")) b.q = Reader::Real(*e, "q");
    env.contexts = b;
  } else if (kind == "finite") {
    environment::FiniteSupport f;
    f.points = Reader::Vectors(r.Require("environment", "points"), "points");
    const Entry& probs = r.Require("environment", "probs");
    f.probs = Reader::Reals(probs.value, "probs", probs.line);
    env.contexts = f;
  } else if (kind == "twocontext") {
    environment::TwoContext c;
    c.inverse_rate = Reader::Real(r.Require("environment", "I"), "I");
    const Entry& rare = r.Require("environment", "x_rare");
    const Entry& common = r.Require("environment", "x_common");
    c.x_rare = Vec(Reader::Reals(rare.value, "x_rare", rare.line));
    c.x_common = Vec(Reader::Reals(common.value, "x_common", common.line));
    env.contexts = c;
  } else {
    throw ConfigError("contexts must be bernoulli, finite or twocontext",
                      contexts ? contexts->line : 0);
  }

  const Entry& thetas = r.Require("environment", "thetas");
  std::uint64_t theta_seed = default_theta_seed;
  if (const Entry* e = r.Find("environment", "theta_seed")) {
    theta_seed = Reader::Uint(*e, "theta_seed");
  }
  theta_scale = 1.0;
  if (thetas.value == "gaussian") {
    Rng rng = MakeRng(theta_seed, Stream::kInstance);
    environment::ThetaDraw draw =
        environment::GaussianThetas(env.dim, env.num_arms, rng);
    env.thetas = std::move(draw.thetas);
    theta_scale = draw.scale;
  } else if (thetas.value == "uniform_normalized") {
    Rng rng = MakeRng(theta_seed, Stream::kInstance);
    env.thetas = calibration::BuildScalingScenario(env.dim, env.num_arms, 0.5,
                                                   0.0, rng)
                     .spec.thetas;
  } else if (thetas.value == "explicit") {
    env.thetas = Reader::Vectors(r.Require("environment", "theta"), "theta");
  } else {
    throw ConfigError("thetas must be gaussian, uniform_normalized or explicit",
                      thetas.line);
  }
  if (const Entry* e = r.Find("environment", "theta_scale")) {
    theta_scale = Reader::Real(*e, "theta_scale");
  }

  const Entry* rewards = r.Find("environment", "rewards");
  const std::string reward_kind = rewards ? rewards->value : "uniform_scaled";
  auto noise_scale = [&] {
    return Reader::Real(r.Require("environment", "noise_scale"), "noise_scale");
  };
  if (reward_kind == "uniform_scaled") {
    env.rewards = environment::UniformScaled{};
  } else if (reward_kind == "gaussian") {
    env.rewards = environment::AdditiveNoise{environment::NoiseKind::kGaussian,
                                             noise_scale()};
  } else if (reward_kind == "uniform") {
    env.rewards = environment::AdditiveNoise{environment::NoiseKind::kUniform,
                                             noise_scale()};
  } else if (reward_kind == "rademacher") {
    env.rewards = environment::AdditiveNoise{environment::NoiseKind::kRademacher,
                                             noise_scale()};
  } else if (reward_kind == "fluctuation") {
    env.rewards = environment::EntryFluctuation{
        Reader::Real(r.Require("environment", "fluctuation"), "fluctuation")};
  } else {
    throw ConfigError(
        "rewards must be uniform_scaled, gaussian, uniform, rademacher or "
        "fluctuation",
        rewards ? rewards->line : 0);
  }
  return env;
}

std::string JoinVec(const Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) out += ", ";
    out += Num(v[i]);
  }
  return out;
}

std::string JoinVectors(const std::vector<Vec>& vs) {
  std::string out;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (k) out += "; ";
    out += JoinVec(vs[k]);
  }
  return out;
}

std::vector<std::string> SplitArgs(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t stop = std::min(text.find(',', start), text.size());
    out.push_back(Trim(text.substr(start, stop - start)));
    start = stop + 1;
  }
  return out;
}

std::uint64_t ParseUintArg(const std::string& s, std::string_view scenario) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("bad scenario argument '" + s + "' in '" +
                      std::string(scenario) + "'");
  }
  return std::strtoull(s.c_str(), nullptr, 10);
}

RunConfig Figure1Base(std::uint64_t seed) {
  RunConfig c;
  c.environment.dim = 3;
  c.environment.num_arms = 6;
  c.environment.contexts = environment::BernoulliNormalized{0.5};
  c.environment.rewards = environment::UniformScaled{};
  Rng rng = MakeRng(seed, Stream::kInstance);
  environment::ThetaDraw draw = environment::GaussianThetas(3, 6, rng);
  c.environment.thetas = std::move(draw.thetas);
  c.theta_scale = draw.scale;
  c.policy.kind = harness::PolicyKind::kEpsGreedy;
  c.policy.p = 192;
  c.run.horizon = 100'000;
  c.run.reps = 10;
  c.run.base_seed = seed;
  return c;
}

}  // namespace

RunConfig ParseConfig(std::string_view text) {
  const Reader r(Tokenize(text));
  RunConfig config;

  if (const Entry* e = r.Find("run", "seed")) config.run.base_seed = Reader::Uint(*e, "seed");
  config.run.horizon = Reader::Uint(r.Require("run", "T"), "T");
  if (const Entry* e = r.Find("run", "reps")) config.run.reps = Reader::Uint(*e, "reps");
  if (const Entry* e = r.Find("run", "out")) config.run.out_path = e->value;
  if (const Entry* e = r.Find("run", "log_every")) {
    config.run.log_every = Reader::Uint(*e, "log_every");
  }
  if (const Entry* e = r.Find("run", "checkpoints")) {
    for (double v : Reader::Reals(e->value, "checkpoints", e->line)) {
      if (v < 1.0 || v != std::floor(v)) {
        throw ConfigError("checkpoints must be positive integers", e->line);
      }
      config.run.checkpoints.push_back(static_cast<std::uint64_t>(v));
    }
  }
  if (const Entry* e = r.Find("run", "C")) config.run.C = Reader::Real(*e, "C");
  if (const Entry* e = r.Find("run", "C_abs")) config.run.C_abs = Reader::Real(*e, "C_abs");

  config.environment = BuildEnvironment(r, config.run.base_seed, config.theta_scale);

  if (const Entry* e = r.Find("policy", "kind")) {
    if (e->value == "eps") {
      config.policy.kind = harness::PolicyKind::kEpsGreedy;
    } else if (e->value == "ucb") {
      config.policy.kind = harness::PolicyKind::kUcb;
    } else if (e->value == "uniform") {
      config.policy.kind = harness::PolicyKind::kUniform;
    } else {
      throw ConfigError("policy kind must be eps, ucb or uniform", e->line);
    }
  }
  if (const Entry* e = r.Find("policy", "p")) config.policy.p = Reader::Uint(*e, "p");
  if (const Entry* e = r.Find("policy", "history_cap")) {
    config.policy.history_cap = Reader::Uint(*e, "history_cap");
  }
  if (const Entry* e = r.Find("policy", "cache_estimates")) {
    config.policy.cache_estimates = Reader::Bool(*e, "cache_estimates");
  }

  config.Validate();
  return config;
}

RunConfig ReadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str());
}

std::string FormatConfig(const RunConfig& config) {
  const EnvironmentSpec& env = config.environment;
  std::ostringstream out;
  out << "[environment]\n";
  out << "d = " << env.dim << "\n";
  out << "K = " << env.num_arms << "\n";
  std::visit(
      [&](const auto& dist) {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, environment::BernoulliNormalized>) {
          out << "contexts = bernoulli\n";
          out << "q = " << Num(dist.q) << "\n";
        } else if constexpr (std::is_same_v<T, environment::FiniteSupport>) {
          out << "contexts = finite\n";
          out << "points = " << JoinVectors(dist.points) << "\n";
          out << "probs = " << JoinVec(Vec(dist.probs)) << "\n";
        } else {
          out << "contexts = twocontext\n";
          out << "I = " << Num(dist.inverse_rate) << "\n";
          out << "x_rare = " << JoinVec(dist.x_rare) << "\n";
          out << "x_common = " << JoinVec(dist.x_common) << "\n";
        }
      },
      env.contexts);
  out << "unit_norm_enforced = " << (env.unit_norm_enforced ? "true" : "false") << "\n";
  out << "thetas = explicit\n";
  out << "theta = " << JoinVectors(env.thetas) << "\n";
  out << "theta_scale = " << Num(config.theta_scale) << "\n";
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, environment::UniformScaled>) {
          out << "rewards = uniform_scaled\n";
        } else if constexpr (std::is_same_v<T, environment::AdditiveNoise>) {
          switch (model.kind) {
            case environment::NoiseKind::kGaussian:
              out << "rewards = gaussian\n";
              break;
            case environment::NoiseKind::kUniform:
              out << "rewards = uniform\n";
              break;
            case environment::NoiseKind::kRademacher:
              out << "rewards = rademacher\n";
              break;
          }
          out << "noise_scale = " << Num(model.scale) << "\n";
        } else {
          out << "rewards = fluctuation\n";
          out << "fluctuation = " << Num(model.bound) << "\n";
        }
      },
      env.rewards);

  out << "\n[policy]\n";
  out << "kind = " << harness::PolicyKindName(config.policy.kind) << "\n";
  out << "p = " << config.policy.p << "\n";
  out << "history_cap = " << config.policy.history_cap << "\n";
  out << "cache_estimates = " << (config.policy.cache_estimates ? "true" : "false")
      << "\n";

  out << "\n[run]\n";
  out << "T = " << config.run.horizon << "\n";
  out << "reps = " << config.run.reps << "\n";
  out << "seed = " << config.run.base_seed << "\n";
  if (!config.run.out_path.empty()) out << "out = " << config.run.out_path << "\n";
  out << "log_every = " << config.run.log_every << "\n";
  if (!config.run.checkpoints.empty()) {
    out << "checkpoints = ";
    for (std::size_t k = 0; k < config.run.checkpoints.size(); ++k) {
      out << (k ? ", " : "") << config.run.checkpoints[k];
    }
    out << "\n";
  }
  out << "C = " << Num(config.run.C) << "\n";
  out << "C_abs = " << Num(config.run.C_abs) << "\n";
  return out.str();
}

void WriteConfig(const RunConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << FormatConfig(config);
}

RunConfig Scenario(std::string_view name, std::uint64_t seed) {
  const std::size_t colon = name.find(':');
  const std::string head(name.substr(0, colon));
  const std::vector<std::string> args =
      colon == std::string_view::npos ? std::vector<std::string>{}
                                      : SplitArgs(name.substr(colon + 1));

  if (head == "fig1a" && args.empty()) return Figure1Base(seed);

  if (head == "fig1b" && args.size() == 1) {
    RunConfig c = Figure1Base(seed);
    c.environment.contexts = environment::TwoContextCube(
        static_cast<double>(ParseUintArg(args[0], name)));
    c.environment.unit_norm_enforced = false;
    c.Validate();
    return c;
  }

  if (head == "twocontext" && args.size() == 1) {
    RunConfig c = Figure1Base(seed);
    c.environment.dim = 2;
    Rng rng = MakeRng(seed, Stream::kInstance);
    environment::ThetaDraw draw = environment::GaussianThetas(2, 6, rng);
    c.environment.thetas = std::move(draw.thetas);
    c.theta_scale = draw.scale;
    c.environment.contexts = environment::TwoContextPlanar(
        static_cast<double>(ParseUintArg(args[0], name)));
    c.environment.unit_norm_enforced = false;
    c.Validate();
    return c;
  }

  if (head == "scaling" && args.size() == 2) {
    const std::uint64_t d = ParseUintArg(args[0], name);
    const std::uint64_t k = ParseUintArg(args[1], name);
    if (d == 0 || k == 0) throw ConfigError("scaling scenario needs d, K >= 1");
    Rng rng = MakeRng(seed, Stream::kInstance);
    calibration::ScalingScenario s = calibration::BuildScalingScenario(d, k, 0.5, 0.1, rng);
    RunConfig c;
    c.environment = std::move(s.spec);
    c.policy.kind = harness::PolicyKind::kEpsGreedy;
    c.policy.p = 32 * k;
    c.run.horizon = 100'000;
    c.run.reps = 10;
    c.run.base_seed = seed;
    c.Validate();
    return c;
  }

  throw ConfigError("unknown scenario '" + std::string(name) +
                    "' (expected fig1a, fig1b:I, scaling:d,K or twocontext:I)");
}

}  // namespace linbandit::config
