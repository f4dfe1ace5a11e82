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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <locale>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "banditlab/analysis.hpp"
#include "banditlab/cli.hpp"
#include "banditlab/errors.hpp"

#ifndef BANDITLAB_VERSION
#define BANDITLAB_VERSION "0.0.0"
#endif

namespace banditlab::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.imbue(std::locale::classic());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "banditlab: " << e.what() << '\n';
  } catch (const ConfigError& e) {
    err << "banditlab: invalid config: " << e.what() << '\n';
  } catch (const IoError& e) {
    err << "banditlab: I/O error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "banditlab: error: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace

std::size_t resolve_workers(const CliCommand& cmd) {
  if (cmd.workers && *cmd.workers > 0) return *cmd.workers;
  if (const char* env = std::getenv("BANDITLAB_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cmd.config_path.empty()) throw ConfigError("--config", "required for run");
    ExperimentConfig config = parse_config(read_file(cmd.config_path));
    if (cmd.seed) config.master_seed = *cmd.seed;
    if (!cmd.output_dir.empty()) config.output_path = cmd.output_dir;
    if (config.output_path.empty()) {
      throw ConfigError("output", "no output directory (use --out or \"output\")");
    }
    for (const auto& w : validate(config)) err << "banditlab: warning: " << w << '\n';

    RunOptions options;
    options.workers = resolve_workers(cmd);
    std::size_t last_percent = 0;
    options.progress = [&](std::size_t done, std::size_t total) {
      const std::size_t percent = done * 100 / total;
      if (percent >= last_percent + 5 || done == total) {
        last_percent = percent;
        err << "progress: " << done << '/' << total << " episodes (" << percent << "%)\n";
      }
    };
    const ResultSet results = run_experiment(config, options);

    const fs::path dir(config.output_path);
    nlohmann::json files = nlohmann::json::array();
    for (const auto& ir : results.instances) {
      const std::string label = ir.instance.label();
      const fs::path raw = dir / ("raw_" + label + ".csv");
      const fs::path agg = dir / ("aggregate_" + label + ".csv");
      {
        auto f = open_output(raw);
        write_raw_csv(f, ir, config.regret);
        finish(f, raw);
      }
      {
        auto f = open_output(agg);
        write_aggregate_csv(f, ir);
        finish(f, agg);
      }
      files.push_back(raw.filename().string());
      files.push_back(agg.filename().string());
    }

    const nlohmann::json manifest = {
        {"code_version", BANDITLAB_VERSION},
        {"config_hash", config_hash(config)},
        {"master_seed", config.master_seed},
        {"config", nlohmann::json::parse(canonical_config_json(config))},
        {"files", files},
    };
    const fs::path manifest_path = dir / "manifest.json";
    auto f = open_output(manifest_path);
    f << manifest.dump(2) << '\n';
    finish(f, manifest_path);

    out << "wrote " << files.size() << " CSV files and manifest.json to "
        << config.output_path << " (" << std::fixed << std::setprecision(1)
        << results.wall_seconds << " s)\n";
    return 0;
  });
}

int verify(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    VerifyOptions options;
    if (cmd.seed) options.seed = *cmd.seed;
    options.sigma_fault = cmd.sigma_fault;
    const auto reports = run_verification_battery(options);

    std::ostringstream table;
    table.imbue(std::locale::classic());
    table << std::left << std::setw(32) << "check" << std::setw(16) << "estimate"
          << std::setw(16) << "reference" << std::setw(20) << "criterion" << "result\n";
    bool all_pass = true;
    for (const auto& r : reports) {
      table << std::left << std::setw(32) << r.name << std::setw(16)
            << std::setprecision(8) << r.estimate << std::setw(16) << r.reference
            << std::setw(20) << r.criterion << (r.pass ? "PASS" : "FAIL");
      table << "  [";
      for (std::size_t i = 0; i < r.parameters.size(); ++i) {
        if (i) table << ", ";
        table << r.parameters[i].first << '=' << r.parameters[i].second;
      }
      table << "]\n";
      all_pass = all_pass && r.pass;
    }
    out << table.str();

    if (!cmd.output_dir.empty()) {
      ensure_writable_directory(cmd.output_dir);
      const fs::path path = fs::path(cmd.output_dir) / "verify.csv";
      auto f = open_output(path);
      f << "check,estimate,reference,pass\n";
      for (const auto& r : reports) {
        f << r.name << ',' << format_double(r.estimate) << ','
          << format_double(r.reference) << ',' << (r.pass ? 1 : 0) << '\n';
      }
      finish(f, path);
    }

    if (!all_pass) {
      for (const auto& r : reports) {
        if (!r.pass) err << "banditlab: verification failed: " << r.name << '\n';
      }
      return 1;
    }
    return 0;
  });
}

int plot(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cmd.output_dir.empty()) throw ConfigError("--out", "required for plot");
    const fs::path dir(cmd.output_dir);
    std::vector<fs::path> inputs;
    if (fs::is_directory(dir)) {
      for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.starts_with("aggregate_") &&
            name.ends_with(".csv")) {
          inputs.push_back(entry.path());
        }
      }
    }
    if (inputs.empty()) {
      throw IoError("no aggregate_*.csv in '" + cmd.output_dir + "'");
    }
    std::sort(inputs.begin(), inputs.end());

    for (const auto& path : inputs) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw IoError("cannot read '" + path.string() + "'");
      const auto rows = read_aggregate_csv(in);
      if (rows.empty()) throw IoError("'" + path.string() + "' has no policy rows");
      std::string label = path.stem().string().substr(std::string("aggregate_").size());
      const fs::path svg_path = dir / ("regret_" + label + ".svg");
      const std::string svg = render_regret_svg(rows, "Regret, " + label);
      auto f = open_output(svg_path);
      f << svg;
      finish(f, svg_path);
      out << "wrote " << svg_path.string() << '\n';
    }
    return 0;
  });
}

int schema(const CliCommand& /*cmd*/, std::ostream& out, std::ostream& /*err*/) {
  out << config_schema();
  return 0;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"banditlab: Monte Carlo laboratory for clipped Thompson sampling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BANDITLAB_VERSION);

  CliCommand cmd;
  std::size_t workers = 0;
  std::uint64_t seed = 0;

  auto* run_cmd = app.add_subcommand("run", "Run a Monte Carlo experiment");
  run_cmd->add_option("--config", cmd.config_path, "Experiment JSON")->required();
  run_cmd->add_option("--out", cmd.output_dir, "Output directory");
  run_cmd->add_option("--seed", seed, "Override the master seed");
  run_cmd->add_option("--workers", workers, "Worker threads (default: BANDITLAB_WORKERS or all cores)");

  auto* verify_cmd = app.add_subcommand("verify", "Run the statistical verification battery");
  verify_cmd->add_option("--out", cmd.output_dir, "Also write verify.csv here");
  verify_cmd->add_option("--seed", seed, "Override the battery seed");
  verify_cmd->add_option("--inject-sigma-fault", cmd.sigma_fault,
                         "Scale the J sampler's sigma (fault injection)")
      ->group("");

  auto* plot_cmd = app.add_subcommand("plot", "Render SVG regret charts from aggregate CSVs");
  plot_cmd->add_option("--out", cmd.output_dir, "Directory holding aggregate_*.csv")->required();

  app.add_subcommand("schema", "Print the JSON schema of the config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code;
  }

  for (auto* sub : {run_cmd, verify_cmd}) {
    if (sub->parsed()) {
      if (sub->count("--seed")) cmd.seed = seed;
      if (sub->get_option_no_throw("--workers") && sub->count("--workers")) cmd.workers = workers;
    }
  }

  if (run_cmd->parsed()) {
    cmd.verb = CliCommand::Verb::Run;
    return run(cmd, out, err);
  }
  if (verify_cmd->parsed()) {
    cmd.verb = CliCommand::Verb::Verify;
    return verify(cmd, out, err);
  }
  if (plot_cmd->parsed()) {
    cmd.verb = CliCommand::Verb::Plot;
    return plot(cmd, out, err);
  }
  cmd.verb = CliCommand::Verb::Schema;
  return schema(cmd, out, err);
}

}  // namespace banditlab::cli
