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

#ifndef BANDITLAB_CORE_HPP_
#define BANDITLAB_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "banditlab/rng.hpp"

namespace banditlab {

// Reward noise around an arm's mean. Both variants are 1-subGaussian.
struct RewardModel {
  enum class Kind { GaussianUnitVariance, BoundedUniform };

  Kind kind = Kind::GaussianUnitVariance;
  // Half-width of the uniform support; only used by BoundedUniform.
  double halfwidth = 0.0;

  static RewardModel gaussian() { return {}; }
  static RewardModel bounded_uniform(double halfwidth) {
    return {Kind::BoundedUniform, halfwidth};
  }

  friend bool operator==(const RewardModel&, const RewardModel&) = default;
};

/// The environment: K arms with fixed means and a reward noise model.
///
/// The best arm is the computed argmax of the means (lowest index on ties);
/// nothing assumes arm 0 is best.
class BanditInstance {
 public:
  // Throws ConfigError if fewer than two arms, a mean is not finite, or the
  // uniform half-width is outside (0, sqrt 3].
  explicit BanditInstance(std::vector<double> means,
                          RewardModel model = RewardModel::gaussian());

  std::size_t arms() const { return means_.size(); }
  const std::vector<double>& means() const { return means_; }
  double mean(std::size_t arm) const { return means_.at(arm); }
  double best_mean() const { return means_[best_arm_]; }
  std::size_t best_arm() const { return best_arm_; }
  const RewardModel& reward_model() const { return model_; }

  // Delta_i = max_j mu_j - mu_i. At least one entry is exactly zero.
  const std::vector<double>& gaps() const { return gaps_; }
  double gap(std::size_t arm) const { return gaps_.at(arm); }

  // One reward from `arm`; consumes exactly one word of `rng`.
  double sample_reward(std::size_t arm, RngStream& rng) const;

 private:
  std::vector<double> means_;
  std::vector<double> gaps_;
  std::size_t best_arm_ = 0;
  RewardModel model_;
};

inline std::vector<double> gaps(const BanditInstance& instance) {
  return instance.gaps();
}

/// Per-arm pull counts T_i(t) and reward sums.
///
/// Sums use Neumaier compensation so that mean(i) stays exact to machine
/// precision over very long runs.
class PullStats {
 public:
  explicit PullStats(std::size_t arms);

  std::size_t arms() const { return counts_.size(); }
  std::uint64_t step() const { return step_; }
  std::uint64_t count(std::size_t arm) const { return counts_.at(arm); }
  std::span<const std::uint64_t> counts() const { return counts_; }

  double reward_sum(std::size_t arm) const;
  // Empirical mean; ContractViolation if the arm was never pulled.
  double mean(std::size_t arm) const;

  // Records one reward. ContractViolation on a bad arm index.
  void observe(std::size_t arm, double reward);

 private:
  std::vector<std::uint64_t> counts_;
  std::vector<double> sums_;
  std::vector<double> compensation_;
  std::uint64_t step_ = 0;
};

// sum_i Delta_i * T_i(t).
double pseudo_regret(const BanditInstance& instance, const PullStats& stats);
// Same, from raw pull counts.
double pseudo_regret(const BanditInstance& instance,
                     std::span<const std::uint64_t> counts);

// Cumulative regret sampled at checkpoints of one run.
struct RegretTrace {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> cumulative_regret;
  std::uint64_t run_seed = 0;

  friend bool operator==(const RegretTrace&, const RegretTrace&) = default;
};

}  // namespace banditlab

#endif  // BANDITLAB_CORE_HPP_
