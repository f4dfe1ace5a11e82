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

#ifndef BANDITLAB_SIMULATOR_HPP_
#define BANDITLAB_SIMULATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "banditlab/core.hpp"
#include "banditlab/policies.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

enum class RegretKind { Pseudo, Realized };
enum class CheckpointSpacing { Geometric, Linear };

// Stream lanes of a repetition stream.
inline constexpr std::uint32_t kPolicyLane = 0;
inline constexpr std::uint32_t kEnvironmentLane = 1;

/// Up to `count` strictly increasing steps ending at `horizon`. Geometric
/// spacing starts at min(max(arms, 10), horizon); linear spacing starts at
/// horizon / count. Rounding collisions are dropped, so fewer than `count`
/// values may come back.
std::vector<std::uint64_t> checkpoint_schedule(
    std::uint64_t horizon, std::size_t count, std::size_t arms = 0,
    CheckpointSpacing spacing = CheckpointSpacing::Geometric);

/// Runs `policy` from its current state until the last checkpoint, drawing
/// rewards from `environment`. Checkpoints must be strictly increasing,
/// within [1, horizon], and end at the horizon.
RegretTrace run_episode(const BanditInstance& instance, Policy& policy,
                        RngStream environment,
                        std::span<const std::uint64_t> checkpoints,
                        RegretKind kind = RegretKind::Pseudo);

/// One full episode of a fresh policy built from `config`. Policy draws use
/// lane kPolicyLane of `stream`, reward noise lane kEnvironmentLane.
/// Identical inputs give a bit-identical trace.
RegretTrace run_episode(const BanditInstance& instance,
                        const PolicyConfig& config, const RngStream& stream,
                        std::span<const std::uint64_t> checkpoints,
                        RegretKind kind = RegretKind::Pseudo);

// Stream id of repetition `repetition` of the policy labelled `label`.
std::uint64_t repetition_stream_id(std::string_view label,
                                   std::uint64_t repetition);

// K arms: one with mean best_mean, K - 1 with best_mean - eps.
struct InstanceSpec {
  std::size_t arms = 2;
  double best_mean = 1.0;
  double eps = 0.1;
  RewardModel reward = RewardModel::gaussian();

  // e.g. "K50_eps0.2"
  std::string label() const;
  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

BanditInstance make_instance(const InstanceSpec& spec);

struct PolicySpec {
  // Unique within an experiment; keys the random streams and the output rows.
  std::string label;
  // horizon and arms are filled in per instance by run_experiment.
  PolicyConfig config;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct ExperimentConfig {
  std::vector<InstanceSpec> instances;
  std::vector<PolicySpec> policies;
  std::uint64_t horizon = 0;
  std::uint64_t repetitions = 1;
  std::uint64_t master_seed = 0;
  std::size_t checkpoint_count = 50;
  CheckpointSpacing spacing = CheckpointSpacing::Geometric;
  RegretKind regret = RegretKind::Pseudo;
  // Directory for artifacts; empty means in-memory only.
  std::string output_path;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Throws ConfigError naming the first offending field; returns policy
// warnings (see validate(const PolicyConfig&)).
std::vector<std::string> validate(const ExperimentConfig& config);

// The PolicyConfig a policy spec resolves to on an instance.
PolicyConfig resolve_policy(const PolicySpec& policy,
                            const InstanceSpec& instance,
                            std::uint64_t horizon);

struct PolicyResult {
  std::string label;
  // One trace per repetition, indexed by repetition.
  std::vector<RegretTrace> traces;
};

struct InstanceResult {
  InstanceSpec instance;
  std::vector<std::uint64_t> checkpoints;
  std::vector<PolicyResult> policies;
};

struct ResultSet {
  ExperimentConfig config;
  std::vector<InstanceResult> instances;
  double wall_seconds = 0.0;
};

struct RunOptions {
  // 0 means std::thread::hardware_concurrency().
  std::size_t workers = 0;
  // Called as (completed, total) after each episode, serialized.
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Runs every (instance, policy, repetition) episode. Results are stored by
/// index, so they do not depend on the worker count or completion order.
/// If config.output_path is set it is created and probed for writability
/// before any episode starts (IoError otherwise).
ResultSet run_experiment(const ExperimentConfig& config,
                         const RunOptions& options = {});

// Creates `dir` if needed and checks a file can be written there.
void ensure_writable_directory(const std::string& dir);

}  // namespace banditlab

#endif  // BANDITLAB_SIMULATOR_HPP_
