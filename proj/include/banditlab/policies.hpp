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

#ifndef BANDITLAB_POLICIES_HPP_
#define BANDITLAB_POLICIES_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "banditlab/core.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

enum class PolicyKind { Mots, MotsVarRho, MotsJ, TsGaussian, Moss, Ucb };

// Config names: "mots", "mots-varrho", "mots-j", "ts", "moss", "ucb".
std::string_view policy_name(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Mots;
  // Exploration constant of the clipping threshold (and of the MOSS index).
  double alpha = 2.0;
  // Variance scaling of the MOTS Gaussian, N(mu_hat, 1 / (rho T_i)).
  double rho = 0.9999;
  // Iterated-logarithm order and lower clamp for MotsVarRho.
  unsigned m = 2;
  double rho_floor = 0.51;
  std::uint64_t horizon = 0;
  std::size_t arms = 0;

  friend bool operator==(const PolicyConfig&, const PolicyConfig&) = default;
};

// Default alpha per kind: 4 for MOSS, 2 otherwise.
double default_alpha(PolicyKind kind);

// Throws ConfigError naming the field on hard violations. Returns soft
// warnings (alpha below the theory's requirement, rho outside (1/2, 1) for
// MOTS, a clamped rho schedule).
std::vector<std::string> validate(const PolicyConfig& config);

/// Fixed-horizon rho schedule: max(1 - sqrt(40 / ilog(m, horizon)), floor).
/// The raw value is below 1/2 for every realizable horizon (it needs
/// ilog(m, T) > 160), so the floor almost always decides.
double rho_schedule(std::uint64_t horizon, unsigned m, double rho_floor);
double rho_schedule_raw(std::uint64_t horizon, unsigned m);
// 1 - sqrt(40 / ilog_value): the schedule as a function of ilog(m, T).
double rho_from_iterated_log(double ilog_value);

// rho actually used: config.rho for Mots, the schedule for MotsVarRho,
// 1 for kinds without a rho.
double effective_rho(const PolicyConfig& config);

// Test hooks; the defaults give the production behaviour.
struct PolicyHooks {
  // Force tau = +inf for the clipped samplers.
  bool disable_clipping = false;
  // Skip validate(); lets tests build e.g. MOTS with rho = 1.
  bool skip_validation = false;
  // Evaluate every arm's draw instead of skipping arms that cannot win.
  bool disable_pruning = false;
  // Called with (arm, theta, tau) for each evaluated draw. Implies
  // disable_pruning.
  std::function<void(std::size_t, double, double)> draw_observer;
};

/// An arm-selection strategy plus its statistics and random stream.
///
/// The first K calls of select_arm() return 0, 1, ..., K-1. Afterwards
/// sampling policies consume exactly K words of their stream per call, word
/// i of the call belonging to arm i; index policies consume none. Ties in
/// the argmax go to the lowest index.
class Policy {
 public:
  Policy(PolicyConfig config, RngStream rng);
  virtual ~Policy() = default;

  Policy(const Policy&) = delete;
  Policy& operator=(const Policy&) = delete;

  // ContractViolation once stats().step() reaches the horizon.
  std::size_t select_arm();
  // Records the reward of `arm` (the arm just selected).
  void observe(std::size_t arm, double reward);

  const PullStats& stats() const { return stats_; }
  const PolicyConfig& config() const { return config_; }
  const RngStream& rng() const { return rng_; }

 protected:
  virtual std::size_t select_after_warm_start() = 0;
  virtual void after_observe(std::size_t /*arm*/) {}

  PullStats stats_;
  PolicyConfig config_;
  RngStream rng_;
};

// Builds a policy in its initial state (zeroed statistics, stream at word 0).
std::unique_ptr<Policy> make_policy(const PolicyConfig& config, RngStream rng,
                                    PolicyHooks hooks = {});

}  // namespace banditlab

#endif  // BANDITLAB_POLICIES_HPP_
