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

#include "banditlab/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "banditlab/errors.hpp"

namespace banditlab {

std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t horizon,
                                               std::size_t count,
                                               std::size_t arms,
                                               CheckpointSpacing spacing) {
  if (count < 2) throw ContractViolation("checkpoint_schedule: count must be >= 2");
  if (horizon < 2) throw ContractViolation("checkpoint_schedule: horizon must be >= 2");

  std::vector<std::uint64_t> out;
  out.reserve(count);
  const double last = static_cast<double>(count - 1);
  if (spacing == CheckpointSpacing::Geometric) {
    const std::uint64_t start = std::min<std::uint64_t>(
        std::max<std::uint64_t>(arms, 10), horizon);
    const double log_ratio =
        std::log(static_cast<double>(horizon) / static_cast<double>(start));
    for (std::size_t j = 0; j < count; ++j) {
      std::uint64_t value;
      if (j == 0) {
        value = start;
      } else if (j + 1 == count) {
        value = horizon;
      } else {
        value = static_cast<std::uint64_t>(std::llround(
            static_cast<double>(start) * std::exp(log_ratio * j / last)));
        value = std::clamp<std::uint64_t>(value, start, horizon);
      }
      out.push_back(value);
    }
  } else {
    for (std::size_t j = 1; j <= count; ++j) {
      const auto value = static_cast<std::uint64_t>(std::llround(
          static_cast<double>(horizon) * j / static_cast<double>(count)));
      out.push_back(std::clamp<std::uint64_t>(value, 1, horizon));
    }
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void check_checkpoints(std::span<const std::uint64_t> checkpoints,
                       std::uint64_t horizon) {
  if (checkpoints.empty()) throw ContractViolation("run_episode: no checkpoints");
  if (checkpoints.front() < 1 || checkpoints.back() != horizon) {
    throw ContractViolation(
        "run_episode: checkpoints must lie in [1, T] and end at T");
  }
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) {
      throw ContractViolation("run_episode: checkpoints must be strictly increasing");
    }
  }
}

}  // namespace

RegretTrace run_episode(const BanditInstance& instance, Policy& policy,
                        RngStream environment,
                        std::span<const std::uint64_t> checkpoints,
                        RegretKind kind) {
  check_checkpoints(checkpoints, policy.config().horizon);
  if (policy.config().arms != instance.arms()) {
    throw ContractViolation("run_episode: policy and instance disagree on K");
  }

  RegretTrace trace;
  trace.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  trace.cumulative_regret.reserve(checkpoints.size());

  double reward_total = 0.0;
  double reward_compensation = 0.0;
  std::size_t next = 0;
  while (next < checkpoints.size() && policy.stats().step() >= checkpoints[next]) {
    ++next;  // checkpoints already behind a pre-advanced policy
    trace.cumulative_regret.push_back(pseudo_regret(instance, policy.stats()));
  }
  for (std::uint64_t t = policy.stats().step() + 1; next < checkpoints.size(); ++t) {
    const std::size_t arm = policy.select_arm();
    const double reward = instance.sample_reward(arm, environment);
    policy.observe(arm, reward);
    if (kind == RegretKind::Realized) {
      const double sum = reward_total + reward;
      reward_compensation += std::fabs(reward_total) >= std::fabs(reward)
                                 ? (reward_total - sum) + reward
                                 : (reward - sum) + reward_total;
      reward_total = sum;
    }
    if (t == checkpoints[next]) {
      if (kind == RegretKind::Pseudo) {
        trace.cumulative_regret.push_back(pseudo_regret(instance, policy.stats()));
      } else {
        trace.cumulative_regret.push_back(static_cast<double>(t) * instance.best_mean() -
                                          (reward_total + reward_compensation));
      }
      ++next;
    }
  }
  return trace;
}

RegretTrace run_episode(const BanditInstance& instance,
                        const PolicyConfig& config, const RngStream& stream,
                        std::span<const std::uint64_t> checkpoints,
                        RegretKind kind) {
  auto policy = make_policy(config, stream.substream(kPolicyLane));
  RegretTrace trace = run_episode(instance, *policy,
                                  stream.substream(kEnvironmentLane),
                                  checkpoints, kind);
  trace.run_seed = stream.stream_id();
  return trace;
}

std::uint64_t repetition_stream_id(std::string_view label,
                                   std::uint64_t repetition) {
  return mix64(fnv1a64(label) ^ mix64(repetition));
}

std::string InstanceSpec::label() const {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, eps);
  std::string out = "K" + std::to_string(arms) + "_eps" + std::string(buf, res.ptr);
  if (best_mean != 1.0) {
    res = std::to_chars(buf, buf + sizeof buf, best_mean);
    out += "_best" + std::string(buf, res.ptr);
  }
  if (reward.kind == RewardModel::Kind::BoundedUniform) {
    res = std::to_chars(buf, buf + sizeof buf, reward.halfwidth);
    out += "_uniform" + std::string(buf, res.ptr);
  }
  return out;
}

BanditInstance make_instance(const InstanceSpec& spec) {
  if (spec.arms < 2) throw ConfigError("K", "need at least two arms");
  if (!(spec.eps >= 0.0) || !std::isfinite(spec.eps)) {
    throw ConfigError("eps", "must be a finite non-negative gap");
  }
  std::vector<double> means(spec.arms, spec.best_mean - spec.eps);
  means[0] = spec.best_mean;
  return BanditInstance(std::move(means), spec.reward);
}

PolicyConfig resolve_policy(const PolicySpec& policy,
                            const InstanceSpec& instance,
                            std::uint64_t horizon) {
  PolicyConfig config = policy.config;
  config.arms = instance.arms;
  config.horizon = horizon;
  return config;
}

std::vector<std::string> validate(const ExperimentConfig& config) {
  if (config.instances.empty()) throw ConfigError("K", "no instance given");
  if (config.policies.empty()) throw ConfigError("policies", "list is empty");
  if (config.repetitions < 1) throw ConfigError("reps", "must be >= 1");
  if (config.checkpoint_count < 2) throw ConfigError("checkpoints", "must be >= 2");
  if (config.horizon < 2) throw ConfigError("T", "must be >= 2");

  std::set<std::string> labels;
  for (const auto& p : config.policies) {
    if (p.label.empty()) throw ConfigError("policies", "empty policy label");
    if (!labels.insert(p.label).second) {
      throw ConfigError("policies", "duplicate policy label '" + p.label + "'");
    }
  }
  std::vector<std::string> warnings;
  for (const auto& inst : config.instances) {
    make_instance(inst);
    if (config.horizon < inst.arms) {
      throw ConfigError("T", "horizon must be >= K (" + std::to_string(inst.arms) + ")");
    }
    for (const auto& p : config.policies) {
      for (auto& w : validate(resolve_policy(p, inst, config.horizon))) {
        if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) {
          warnings.push_back(std::move(w));
        }
      }
    }
  }
  return warnings;
}

void ensure_writable_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir + "'");
  }
  const fs::path probe = fs::path(dir) / ".banditlab_write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "probe") || !out.flush()) {
      throw IoError("output directory '" + dir + "' is not writable");
    }
  }
  fs::remove(probe, ec);
}

ResultSet run_experiment(const ExperimentConfig& config,
                         const RunOptions& options) {
  validate(config);
  if (!config.output_path.empty()) ensure_writable_directory(config.output_path);

  const auto started = std::chrono::steady_clock::now();
  ResultSet results;
  results.config = config;

  struct Job {
    std::size_t instance;
    std::size_t policy;
    std::uint64_t repetition;
  };
  std::vector<Job> jobs;
  std::vector<BanditInstance> instances;
  for (std::size_t i = 0; i < config.instances.size(); ++i) {
    const InstanceSpec& spec = config.instances[i];
    instances.push_back(make_instance(spec));
    InstanceResult ir;
    ir.instance = spec;
    ir.checkpoints = checkpoint_schedule(config.horizon, config.checkpoint_count,
                                         spec.arms, config.spacing);
    for (std::size_t p = 0; p < config.policies.size(); ++p) {
      ir.policies.push_back({config.policies[p].label,
                             std::vector<RegretTrace>(config.repetitions)});
      for (std::uint64_t r = 0; r < config.repetitions; ++r) jobs.push_back({i, p, r});
    }
    results.instances.push_back(std::move(ir));
  }

  std::size_t workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, jobs.size());

  std::atomic<std::size_t> next_job{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::size_t completed = 0;
  std::exception_ptr error;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t j = next_job.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job& job = jobs[j];
      try {
        const PolicySpec& ps = config.policies[job.policy];
        const PolicyConfig pc = resolve_policy(ps, config.instances[job.instance],
                                               config.horizon);
        InstanceResult& ir = results.instances[job.instance];
        const RngStream stream(config.master_seed,
                               repetition_stream_id(ps.label, job.repetition));
        ir.policies[job.policy].traces[job.repetition] = run_episode(
            instances[job.instance], pc, stream, ir.checkpoints, config.regret);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
      if (options.progress) {
        std::lock_guard lock(mu);
        options.progress(++completed, jobs.size());
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  results.wall_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - started)
                             .count();
  return results;
}

}  // namespace banditlab
