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

#include "banditlab/core.hpp"

#include <cmath>
#include <string>

#include "banditlab/distributions.hpp"
#include "banditlab/errors.hpp"

namespace banditlab {

BanditInstance::BanditInstance(std::vector<double> means, RewardModel model)
    : means_(std::move(means)), model_(model) {
  if (means_.size() < 2) {
    throw ConfigError("K", "a bandit instance needs at least two arms");
  }
  for (std::size_t i = 0; i < means_.size(); ++i) {
    if (!std::isfinite(means_[i])) {
      throw ConfigError("means", "mean of arm " + std::to_string(i) +
                                     " is not finite");
    }
    if (means_[i] > means_[best_arm_]) best_arm_ = i;
  }
  if (model_.kind == RewardModel::Kind::BoundedUniform &&
      !(model_.halfwidth > 0.0 && model_.halfwidth <= std::sqrt(3.0))) {
    throw ConfigError("uniform_halfwidth",
                      "must lie in (0, sqrt(3)] to stay 1-subGaussian");
  }
  gaps_.reserve(means_.size());
  const double best = means_[best_arm_];
  for (const double mu : means_) gaps_.push_back(best - mu);
}

double BanditInstance::sample_reward(std::size_t arm, RngStream& rng) const {
  const double mu = means_.at(arm);
  switch (model_.kind) {
    case RewardModel::Kind::GaussianUnitVariance:
      return mu + standard_normal(rng);
    case RewardModel::Kind::BoundedUniform:
      return mu + model_.halfwidth * (2.0 * rng.next_uniform() - 1.0);
  }
  return mu;
}

PullStats::PullStats(std::size_t arms)
    : counts_(arms, 0), sums_(arms, 0.0), compensation_(arms, 0.0) {}

double PullStats::reward_sum(std::size_t arm) const {
  return sums_.at(arm) + compensation_[arm];
}

double PullStats::mean(std::size_t arm) const {
  if (arm >= counts_.size()) {
    throw ContractViolation("PullStats::mean: arm index out of range");
  }
  if (counts_[arm] == 0) {
    throw ContractViolation("PullStats::mean: arm " + std::to_string(arm) +
                            " has no observations");
  }
  return (sums_[arm] + compensation_[arm]) / static_cast<double>(counts_[arm]);
}

void PullStats::observe(std::size_t arm, double reward) {
  if (arm >= counts_.size()) {
    throw ContractViolation("PullStats::observe: arm " + std::to_string(arm) +
                            " out of range");
  }
  // Neumaier summation.
  double& sum = sums_[arm];
  const double t = sum + reward;
  if (std::fabs(sum) >= std::fabs(reward)) {
    compensation_[arm] += (sum - t) + reward;
  } else {
    compensation_[arm] += (reward - t) + sum;
  }
  sum = t;
  ++counts_[arm];
  ++step_;
}

double pseudo_regret(const BanditInstance& instance,
                     std::span<const std::uint64_t> counts) {
  if (counts.size() != instance.arms()) {
    throw ContractViolation("pseudo_regret: count vector size mismatch");
  }
  double regret = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    regret += instance.gaps()[i] * static_cast<double>(counts[i]);
  }
  return regret;
}

double pseudo_regret(const BanditInstance& instance, const PullStats& stats) {
  return pseudo_regret(instance, stats.counts());
}

}  // namespace banditlab
