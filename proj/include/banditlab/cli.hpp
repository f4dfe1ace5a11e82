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

#ifndef BANDITLAB_CLI_HPP_
#define BANDITLAB_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "banditlab/simulator.hpp"

namespace banditlab::cli {

struct CliCommand {
  enum class Verb { Run, Verify, Plot, Schema };

  Verb verb = Verb::Schema;
  std::string config_path;
  std::string output_dir;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  // verify only: scales the J sampler's sigma (fault injection).
  double sigma_fault = 1.0;
};

/// Parses and validates a JSON experiment description (see config_schema()).
/// Defaults: rho 0.9999, alpha 2 (4 for MOSS), Gaussian unit-variance
/// rewards, best mean 1, 50 geometric checkpoints, pseudo-regret. Unknown
/// keys are rejected. Throws ParseError (with line and column) on malformed
/// JSON and ConfigError naming the field on invalid values.
ExperimentConfig parse_config(std::string_view text);

// JSON Schema of the configuration document.
std::string config_schema();

// Normalized config (defaults applied, output path excluded) as compact JSON
// with sorted keys, and its 64-bit FNV-1a hash as 16 hex digits.
std::string canonical_config_json(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

// Locale-independent, 17 significant digits.
std::string format_double(double value);

// policy,repetition,checkpoint,t,pseudo_regret
void write_raw_csv(std::ostream& out, const InstanceResult& result,
                   RegretKind kind = RegretKind::Pseudo);
// policy,t,mean_regret,stderr,reps
void write_aggregate_csv(std::ostream& out, const InstanceResult& result);

struct AggregateRow {
  std::string policy;
  std::uint64_t t = 0;
  double mean_regret = 0.0;
  double std_error = 0.0;
  std::size_t repetitions = 0;
};

// Throws IoError on a malformed file.
std::vector<AggregateRow> read_aggregate_csv(std::istream& in);

/// Standalone SVG: log-scale t axis, one polyline per policy with a
/// +-2 stderr band and a legend. Throws ContractViolation if `rows` is empty.
std::string render_regret_svg(const std::vector<AggregateRow>& rows,
                              const std::string& title);

// Worker count: --workers, then BANDITLAB_WORKERS, then hardware threads.
std::size_t resolve_workers(const CliCommand& cmd);

// Verbs. Each returns the process exit status.
int run(const CliCommand& cmd, std::ostream& out, std::ostream& err);
int verify(const CliCommand& cmd, std::ostream& out, std::ostream& err);
int plot(const CliCommand& cmd, std::ostream& out, std::ostream& err);
int schema(const CliCommand& cmd, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to a verb.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace banditlab::cli

#endif  // BANDITLAB_CLI_HPP_
