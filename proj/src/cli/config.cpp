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

#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <string>

#include <json.hpp>

#include "banditlab/cli.hpp"
#include "banditlab/errors.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::cli {

using nlohmann::json;

namespace {

constexpr double kDefaultRho = 0.9999;
constexpr double kDefaultUniformHalfwidth = 1.0;

const std::set<std::string>& top_level_keys() {
  static const std::set<std::string> keys = {
      "K",     "eps",         "best_mean",          "reward_model",
      "uniform_halfwidth", "T", "reps", "seed",     "checkpoints",
      "checkpoint_spacing", "regret", "rho",        "alpha",
      "m",     "rho_floor",   "policies",           "output"};
  return keys;
}

const std::set<std::string>& policy_keys() {
  static const std::set<std::string> keys = {"name", "label", "alpha", "rho", "m",
                                             "rho_floor"};
  return keys;
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
  return v;
}

std::uint64_t get_count(const json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    throw ConfigError(field, "must be a non-negative integer");
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v >= 0.0 && v < 1.8e19 && std::floor(v) == v) {
      return static_cast<std::uint64_t>(v);
    }
  }
  throw ConfigError(field, "expected a non-negative integer");
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string");
  return j.get<std::string>();
}

template <typename T, typename F>
std::vector<T> scalar_or_list(const json& j, const std::string& field, F get) {
  std::vector<T> out;
  if (j.is_array()) {
    if (j.empty()) throw ConfigError(field, "list is empty");
    for (const auto& v : j) out.push_back(get(v, field));
  } else {
    out.push_back(get(j, field));
  }
  return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

struct PolicyDefaults {
  std::optional<double> alpha;
  double rho = kDefaultRho;
  unsigned m = 2;
  double rho_floor = 0.51;
};

PolicySpec parse_policy(const json& j, std::size_t index,
                        const PolicyDefaults& defaults) {
  const std::string where = "policies[" + std::to_string(index) + "]";
  std::string name;
  const json* obj = nullptr;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else if (j.is_object()) {
    for (const auto& [key, _] : j.items()) {
      if (!policy_keys().contains(key)) {
        throw ConfigError(where + "." + key, "unknown key");
      }
    }
    if (!j.contains("name")) throw ConfigError(where + ".name", "missing");
    name = get_string(j.at("name"), where + ".name");
    obj = &j;
  } else {
    throw ConfigError(where, "expected a policy name or object");
  }

  const auto kind = parse_policy_kind(name);
  if (!kind) {
    throw ConfigError(where + ".name", "unknown policy '" + name +
                                           "' (expected mots, mots-varrho, "
                                           "mots-j, ts, moss or ucb)");
  }

  PolicySpec spec;
  spec.label = name;
  spec.config.kind = *kind;
  spec.config.alpha = (defaults.alpha && *kind != PolicyKind::Moss)
                          ? *defaults.alpha
                          : default_alpha(*kind);
  spec.config.rho = defaults.rho;
  spec.config.m = defaults.m;
  spec.config.rho_floor = defaults.rho_floor;
  if (obj) {
    if (obj->contains("label")) spec.label = get_string(obj->at("label"), where + ".label");
    if (obj->contains("alpha")) spec.config.alpha = get_number(obj->at("alpha"), "alpha");
    if (obj->contains("rho")) spec.config.rho = get_number(obj->at("rho"), "rho");
    if (obj->contains("m")) spec.config.m = static_cast<unsigned>(get_count(obj->at("m"), "m"));
    if (obj->contains("rho_floor")) {
      spec.config.rho_floor = get_number(obj->at("rho_floor"), "rho_floor");
    }
  }
  return spec;
}

json policy_to_json(const PolicySpec& p) {
  // Only the parameters a kind actually reads enter the canonical form.
  json j = {{"name", std::string(policy_name(p.config.kind))}, {"label", p.label}};
  switch (p.config.kind) {
    case PolicyKind::Mots:
      j["rho"] = p.config.rho;
      j["alpha"] = p.config.alpha;
      break;
    case PolicyKind::MotsVarRho:
      j["m"] = p.config.m;
      j["rho_floor"] = p.config.rho_floor;
      j["alpha"] = p.config.alpha;
      break;
    case PolicyKind::MotsJ:
    case PolicyKind::Moss:
      j["alpha"] = p.config.alpha;
      break;
    default:
      break;
  }
  return j;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, column] = line_column(text, byte);
    std::string what = e.what();
    if (const auto pos = what.find("parse error"); pos != std::string::npos) {
      if (const auto colon = what.find(": ", pos); colon != std::string::npos) {
        what = what.substr(colon + 2);
      }
    }
    throw ParseError(line, column, what);
  }
  if (!doc.is_object()) throw ParseError(1, 1, "top-level value must be an object");

  for (const auto& [key, _] : doc.items()) {
    if (!top_level_keys().contains(key)) throw ConfigError(key, "unknown key");
  }
  for (const char* required : {"K", "eps", "T", "policies"}) {
    if (!doc.contains(required)) throw ConfigError(required, "missing required key");
  }

  ExperimentConfig config;
  const auto arms = scalar_or_list<std::uint64_t>(doc.at("K"), "K", get_count);
  const auto gaps = scalar_or_list<double>(doc.at("eps"), "eps", get_number);
  const double best_mean =
      doc.contains("best_mean") ? get_number(doc.at("best_mean"), "best_mean") : 1.0;

  RewardModel reward = RewardModel::gaussian();
  if (doc.contains("reward_model")) {
    const std::string model = get_string(doc.at("reward_model"), "reward_model");
    if (model == "uniform") {
      reward = RewardModel::bounded_uniform(kDefaultUniformHalfwidth);
    } else if (model != "gaussian") {
      throw ConfigError("reward_model", "expected \"gaussian\" or \"uniform\"");
    }
  }
  if (doc.contains("uniform_halfwidth")) {
    if (reward.kind != RewardModel::Kind::BoundedUniform) {
      throw ConfigError("uniform_halfwidth", "only valid with reward_model \"uniform\"");
    }
    reward.halfwidth = get_number(doc.at("uniform_halfwidth"), "uniform_halfwidth");
  }

  for (const auto k : arms) {
    for (const double eps : gaps) {
      if (eps < 0.0) throw ConfigError("eps", "must be >= 0");
      config.instances.push_back({static_cast<std::size_t>(k), best_mean, eps, reward});
    }
  }

  config.horizon = get_count(doc.at("T"), "T");
  if (doc.contains("reps")) config.repetitions = get_count(doc.at("reps"), "reps");
  if (doc.contains("seed")) config.master_seed = get_count(doc.at("seed"), "seed");
  if (doc.contains("checkpoints")) {
    config.checkpoint_count =
        static_cast<std::size_t>(get_count(doc.at("checkpoints"), "checkpoints"));
  }
  if (doc.contains("checkpoint_spacing")) {
    const std::string s = get_string(doc.at("checkpoint_spacing"), "checkpoint_spacing");
    if (s == "linear") {
      config.spacing = CheckpointSpacing::Linear;
    } else if (s != "geometric") {
      throw ConfigError("checkpoint_spacing", "expected \"geometric\" or \"linear\"");
    }
  }
  if (doc.contains("regret")) {
    const std::string s = get_string(doc.at("regret"), "regret");
    if (s == "realized") {
      config.regret = RegretKind::Realized;
    } else if (s != "pseudo") {
      throw ConfigError("regret", "expected \"pseudo\" or \"realized\"");
    }
  }
  if (doc.contains("output")) config.output_path = get_string(doc.at("output"), "output");

  PolicyDefaults defaults;
  if (doc.contains("alpha")) defaults.alpha = get_number(doc.at("alpha"), "alpha");
  if (doc.contains("rho")) defaults.rho = get_number(doc.at("rho"), "rho");
  if (doc.contains("m")) defaults.m = static_cast<unsigned>(get_count(doc.at("m"), "m"));
  if (doc.contains("rho_floor")) {
    defaults.rho_floor = get_number(doc.at("rho_floor"), "rho_floor");
  }

  const json& policies = doc.at("policies");
  if (!policies.is_array()) throw ConfigError("policies", "expected a list");
  for (std::size_t i = 0; i < policies.size(); ++i) {
    config.policies.push_back(parse_policy(policies[i], i, defaults));
  }

  validate(config);
  return config;
}

std::string canonical_config_json(const ExperimentConfig& config) {
  json instances = json::array();
  for (const auto& inst : config.instances) {
    json j = {{"K", inst.arms}, {"eps", inst.eps}, {"best_mean", inst.best_mean}};
    if (inst.reward.kind == RewardModel::Kind::BoundedUniform) {
      j["reward_model"] = "uniform";
      j["uniform_halfwidth"] = inst.reward.halfwidth;
    } else {
      j["reward_model"] = "gaussian";
    }
    instances.push_back(std::move(j));
  }
  json policies = json::array();
  for (const auto& p : config.policies) policies.push_back(policy_to_json(p));

  const json doc = {
      {"instances", instances},
      {"policies", policies},
      {"T", config.horizon},
      {"reps", config.repetitions},
      {"seed", config.master_seed},
      {"checkpoints", config.checkpoint_count},
      {"checkpoint_spacing",
       config.spacing == CheckpointSpacing::Linear ? "linear" : "geometric"},
      {"regret", config.regret == RegretKind::Realized ? "realized" : "pseudo"},
  };
  return doc.dump();
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config_json(config))));
  return buf;
}

std::string config_schema() {
  static const json schema = json::parse(R"JSON({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "banditlab experiment",
  "type": "object",
  "additionalProperties": false,
  "required": ["K", "eps", "T", "policies"],
  "properties": {
    "K": {"description": "Number of arms; a list runs one instance per value.",
          "oneOf": [{"type": "integer", "minimum": 2},
                    {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1}]},
    "eps": {"description": "Gap between the best arm and the K-1 others; a list runs one instance per value.",
            "oneOf": [{"type": "number", "minimum": 0},
                      {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1}]},
    "best_mean": {"type": "number", "default": 1.0},
    "reward_model": {"enum": ["gaussian", "uniform"], "default": "gaussian"},
    "uniform_halfwidth": {"type": "number", "exclusiveMinimum": 0, "maximum": 1.7320508075688772,
                          "default": 1.0},
    "T": {"description": "Horizon, warm-start pulls included.", "type": "integer", "minimum": 2},
    "reps": {"type": "integer", "minimum": 1, "default": 1},
    "seed": {"type": "integer", "minimum": 0, "default": 0},
    "checkpoints": {"type": "integer", "minimum": 2, "default": 50},
    "checkpoint_spacing": {"enum": ["geometric", "linear"], "default": "geometric"},
    "regret": {"enum": ["pseudo", "realized"], "default": "pseudo"},
    "alpha": {"description": "Default clipping constant for mots, mots-varrho, mots-j (moss keeps 4 unless set per policy).",
              "type": "number", "exclusiveMinimum": 0, "default": 2.0},
    "rho": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 0.9999},
    "m": {"type": "integer", "minimum": 2, "default": 2},
    "rho_floor": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 0.51},
    "output": {"type": "string", "description": "Output directory (overridden by --out)."},
    "policies": {
      "type": "array", "minItems": 1,
      "items": {
        "oneOf": [
          {"enum": ["mots", "mots-varrho", "mots-j", "ts", "moss", "ucb"]},
          {"type": "object", "additionalProperties": false, "required": ["name"],
           "properties": {
             "name": {"enum": ["mots", "mots-varrho", "mots-j", "ts", "moss", "ucb"]},
             "label": {"type": "string", "minLength": 1},
             "alpha": {"type": "number", "exclusiveMinimum": 0},
             "rho": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
             "m": {"type": "integer", "minimum": 2},
             "rho_floor": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}}}
        ]
      }
    }
  }
})JSON");
  return schema.dump(2) + "\n";
}

}  // namespace banditlab::cli
