// Copyright 2026 The BanditLab Authors.
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

#include "banditlab/policies.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <limits>
#include <utility>

#include "banditlab/distributions.hpp"
#include "banditlab/errors.hpp"

namespace banditlab {

namespace {

constexpr std::array<std::pair<PolicyKind, std::string_view>, 6> kPolicyNames{{
    {PolicyKind::Mots, "mots"},
    {PolicyKind::MotsVarRho, "mots-varrho"},
    {PolicyKind::MotsJ, "mots-j"},
    {PolicyKind::TsGaussian, "ts"},
    {PolicyKind::Moss, "moss"},
    {PolicyKind::Ucb, "ucb"},
}};

// Returns true when a value `v` at arm `i` would win against the incumbent
// (best_value, best_arm) under argmax with lowest-index tie-breaking.
inline bool beats(double v, std::size_t i, double best_value,
                  std::size_t best_arm) {
  return v > best_value || (v == best_value && i < best_arm);
}

// Upper bounds on a standardized draw given its uniform: u <= level[k]
// implies transform(u) <= bound[k]. Level 0 is the median. The others are
// shrunk by a relative 1e-9 so that approximation error in the transforms
// cannot break the bound. Lookup is branch-free since u is random.
struct QuantileBounds {
  static constexpr std::size_t kLevels = 10;
  std::array<double, kLevels> level{};
  std::array<double, kLevels + 1> bound{};

  template <typename Cdf>
  explicit QuantileBounds(Cdf cdf) {
    constexpr std::array<double, kLevels> grid = {0.0, 0.5, 1.0, 1.5, 2.0,
                                                  2.5, 3.0, 4.0, 5.0, 6.0};
    level[0] = 0.5;
    for (std::size_t k = 1; k < kLevels; ++k) {
      level[k] = cdf(grid[k]) * (1.0 - 1e-9);
    }
    // k levels exceeded: the draw is at most grid[k] standard units.
    for (std::size_t k = 0; k < kLevels; ++k) bound[k] = grid[k];
    bound[kLevels] = std::numeric_limits<double>::infinity();
  }

  double operator()(double u) const {
    std::size_t k = 0;
    for (std::size_t j = 0; j < kLevels; ++j) k += u > level[j] ? 1 : 0;
    return bound[k];
  }
};

const QuantileBounds& gaussian_bounds() {
  static const QuantileBounds table([](double z) { return normal_cdf(z); });
  return table;
}

const QuantileBounds& j_bounds() {
  static const QuantileBounds table(
      [](double z) { return 1.0 - 0.5 * std::exp(-z * z / 2.0); });
  return table;
}

// Thompson-style policies: MOTS, MOTS with scheduled rho, MOTS-J and
// unclipped Gaussian TS. Per-arm mean, scale and threshold are cached and
// refreshed only when the arm is observed.
class SamplingPolicy final : public Policy {
 public:
  SamplingPolicy(PolicyConfig config, RngStream rng, PolicyHooks hooks)
      : Policy(config, std::move(rng)),
        mean_(config.arms, 0.0),
        scale_(config.arms, 0.0),
        tau_(config.arms, std::numeric_limits<double>::infinity()),
        observer_(std::move(hooks.draw_observer)) {
    switch (config.kind) {
      case PolicyKind::Mots:
      case PolicyKind::MotsVarRho:
        rho_ = effective_rho(config);
        break;
      case PolicyKind::MotsJ:
        j_sampler_ = true;
        break;
      case PolicyKind::TsGaussian:
        clip_ = false;
        break;
      default:
        throw ContractViolation("SamplingPolicy: not a sampling policy kind");
    }
    if (hooks.disable_clipping) clip_ = false;
    prune_ = !hooks.disable_pruning && !observer_;
  }

 protected:
  std::size_t select_after_warm_start() override {
    const std::size_t arms = config_.arms;
    const std::uint64_t base = rng_.position();
    rng_.advance(arms);

    if (!prune_) {
      double best = 0.0;
      std::size_t best_arm = 0;
      for (std::size_t i = 0; i < arms; ++i) {
        const double theta = draw(i, rng_.uniform_at(base + i));
        if (observer_) observer_(i, theta, tau_[i]);
        if (i == 0 || beats(theta, i, best, best_arm)) {
          best = theta;
          best_arm = i;
        }
      }
      return best_arm;
    }

    // Evaluate the empirical leader first, then only arms whose upper bound
    // can still win. The bound is tau_i, tightened by a tabulated quantile
    // bound from the arm's uniform. Skipped arms cannot change the argmax.
    const QuantileBounds& bounds = j_sampler_ ? j_bounds() : gaussian_bounds();
    std::size_t best_arm = static_cast<std::size_t>(
        std::max_element(mean_.begin(), mean_.end()) - mean_.begin());
    double best = draw(best_arm, rng_.uniform_at(base + best_arm));
    const std::size_t leader = best_arm;
    for (std::size_t i = 0; i < arms; ++i) {
      if (i == leader || !beats(tau_[i], i, best, best_arm)) continue;
      const double u = rng_.uniform_at(base + i);
      const double draw_bound = mean_[i] + scale_[i] * bounds(u);
      if (!beats(draw_bound, i, best, best_arm)) continue;
      const double theta = draw(i, u);
      if (beats(theta, i, best, best_arm)) {
        best = theta;
        best_arm = i;
      }
    }
    return best_arm;
  }

  void after_observe(std::size_t arm) override {
    const double pulls = static_cast<double>(stats_.count(arm));
    mean_[arm] = stats_.mean(arm);
    scale_[arm] = j_sampler_ ? std::sqrt(1.0 / pulls)
                             : std::sqrt(1.0 / (rho_ * pulls));
    if (clip_) {
      tau_[arm] = clip_threshold(mean_[arm], stats_.count(arm), config_.horizon,
                                 config_.arms, config_.alpha);
    }
  }

 private:
  double draw(std::size_t arm, double u) const {
    const double raw =
        j_sampler_ ? detail::j_transform(u, mean_[arm], scale_[arm])
                   : mean_[arm] + scale_[arm] * normal_quantile(u);
    const double theta = std::min(raw, tau_[arm]);
    assert(theta <= tau_[arm]);
    return theta;
  }

  std::vector<double> mean_;
  std::vector<double> scale_;
  std::vector<double> tau_;
  double rho_ = 1.0;
  bool j_sampler_ = false;
  bool clip_ = true;
  bool prune_ = true;
  std::function<void(std::size_t, double, double)> observer_;
};

// MOSS: mu_hat + sqrt((alpha / T_i) log+(T / (K T_i))), the same form as the
// clipping threshold.
class MossPolicy final : public Policy {
 public:
  MossPolicy(PolicyConfig config, RngStream rng)
      : Policy(config, std::move(rng)), index_(config.arms, 0.0) {}

 protected:
  std::size_t select_after_warm_start() override {
    return static_cast<std::size_t>(
        std::max_element(index_.begin(), index_.end()) - index_.begin());
  }

  void after_observe(std::size_t arm) override {
    index_[arm] = clip_threshold(stats_.mean(arm), stats_.count(arm),
                                 config_.horizon, config_.arms, config_.alpha);
  }

 private:
  std::vector<double> index_;
};

// Gaussian UCB: mu_hat + sqrt(2 ln t / T_i), t the round being played.
class UcbPolicy final : public Policy {
 public:
  UcbPolicy(PolicyConfig config, RngStream rng)
      : Policy(config, std::move(rng)),
        mean_(config.arms, 0.0),
        pulls_(config.arms, 1.0) {}

 protected:
  std::size_t select_after_warm_start() override {
    const double t = static_cast<double>(stats_.step() + 1);
    const double numerator = 2.0 * std::log(t);
    std::size_t best_arm = 0;
    double best = mean_[0] + std::sqrt(numerator / pulls_[0]);
    for (std::size_t i = 1; i < mean_.size(); ++i) {
      const double index = mean_[i] + std::sqrt(numerator / pulls_[i]);
      if (index > best) {
        best = index;
        best_arm = i;
      }
    }
    return best_arm;
  }

  void after_observe(std::size_t arm) override {
    mean_[arm] = stats_.mean(arm);
    pulls_[arm] = static_cast<double>(stats_.count(arm));
  }

 private:
  std::vector<double> mean_;
  std::vector<double> pulls_;
};

}  // namespace

std::string_view policy_name(PolicyKind kind) {
  for (const auto& [k, name] : kPolicyNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (const auto& [k, n] : kPolicyNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

double default_alpha(PolicyKind kind) {
  return kind == PolicyKind::Moss ? 4.0 : 2.0;
}

std::vector<std::string> validate(const PolicyConfig& config) {
  if (config.arms < 2) throw ConfigError("K", "need at least two arms");
  if (config.horizon < config.arms) {
    throw ConfigError("T", "horizon must be >= number of arms");
  }
  if (!(config.alpha > 0.0) || !std::isfinite(config.alpha)) {
    throw ConfigError("alpha", "must be a positive finite number");
  }
  if (!(config.rho > 0.0 && config.rho < 1.0)) {
    throw ConfigError("rho", "must lie in (0, 1)");
  }
  if (config.m < 2) throw ConfigError("m", "iterated-log order must be >= 2");
  if (!(config.rho_floor > 0.0 && config.rho_floor < 1.0)) {
    throw ConfigError("rho_floor", "must lie in (0, 1)");
  }

  std::vector<std::string> warnings;
  const std::string name(policy_name(config.kind));
  switch (config.kind) {
    case PolicyKind::Mots:
      if (config.rho <= 0.5) {
        warnings.push_back(name + ": rho <= 1/2 is outside the range (1/2, 1) "
                                  "covered by the minimax guarantee");
      }
      [[fallthrough]];
    case PolicyKind::MotsVarRho:
      if (config.alpha < 4.0) {
        warnings.push_back(name + ": alpha < 4 is below the subGaussian "
                                  "minimax guarantee");
      }
      break;
    case PolicyKind::MotsJ:
      if (config.alpha < 2.0) {
        warnings.push_back(name + ": alpha < 2 is below the guarantee for "
                                  "Gaussian rewards");
      }
      break;
    default:
      break;
  }
  if (config.kind == PolicyKind::MotsVarRho) {
    const double raw = rho_schedule_raw(config.horizon, config.m);
    if (raw < config.rho_floor) {
      warnings.push_back(name + ": scheduled rho_raw = " + std::to_string(raw) +
                         " clamped to rho_floor = " +
                         std::to_string(config.rho_floor));
    }
  }
  return warnings;
}

double rho_schedule_raw(std::uint64_t horizon, unsigned m) {
  if (m < 2) throw ContractViolation("rho_schedule: m must be >= 2");
  if (horizon < 2) throw ContractViolation("rho_schedule: horizon must be >= 2");
  return rho_from_iterated_log(ilog(m, static_cast<double>(horizon)));
}

double rho_from_iterated_log(double ilog_value) {
  return 1.0 - std::sqrt(40.0 / ilog_value);
}

double rho_schedule(std::uint64_t horizon, unsigned m, double rho_floor) {
  return std::max(rho_schedule_raw(horizon, m), rho_floor);
}

double effective_rho(const PolicyConfig& config) {
  switch (config.kind) {
    case PolicyKind::Mots:
      return config.rho;
    case PolicyKind::MotsVarRho:
      return rho_schedule(config.horizon, config.m, config.rho_floor);
    default:
      return 1.0;
  }
}

Policy::Policy(PolicyConfig config, RngStream rng)
    : stats_(config.arms), config_(config), rng_(std::move(rng)) {}

std::size_t Policy::select_arm() {
  const std::uint64_t step = stats_.step();
  if (step >= config_.horizon) {
    throw ContractViolation("select_arm called past the horizon");
  }
  if (step < config_.arms) return static_cast<std::size_t>(step);
  return select_after_warm_start();
}

void Policy::observe(std::size_t arm, double reward) {
  if (stats_.step() >= config_.horizon) {
    throw ContractViolation("observe called past the horizon");
  }
  stats_.observe(arm, reward);
  after_observe(arm);
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, RngStream rng,
                                    PolicyHooks hooks) {
  if (!hooks.skip_validation) validate(config);
  switch (config.kind) {
    case PolicyKind::Moss:
      return std::make_unique<MossPolicy>(config, std::move(rng));
    case PolicyKind::Ucb:
      return std::make_unique<UcbPolicy>(config, std::move(rng));
    default:
      return std::make_unique<SamplingPolicy>(config, std::move(rng),
                                              std::move(hooks));
  }
}

}  // namespace banditlab
