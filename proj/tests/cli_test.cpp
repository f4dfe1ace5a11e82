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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <locale>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "banditlab/cli.hpp"
#include "banditlab/errors.hpp"

namespace fs = std::filesystem;
using banditlab::cli::CliCommand;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("banditlab_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string field_of(const std::string& text) {
  try {
    banditlab::cli::parse_config(text);
  } catch (const banditlab::ConfigError& e) {
    return e.field();
  }
  return "none";
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  args.insert(args.begin(), "banditlab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int rc = banditlab::cli::main_entry(static_cast<int>(argv.size()),
                                            argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

const char* kSmallConfig = R"({
  "K": 4, "eps": 0.3, "T": 3000, "reps": 2, "seed": 5, "checkpoints": 5,
  "policies": ["mots", "ucb"]
})";

// Decimal comma, to check that output ignores the global locale.
struct CommaPunct : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto c = banditlab::cli::parse_config(
      R"({"K": 50, "eps": 0.2, "T": 1e6, "reps": 100, "policies": ["mots", "ts"]})");
  REQUIRE(c.instances.size() == 1);
  CHECK(c.instances[0].arms == 50);
  CHECK(c.instances[0].eps == 0.2);
  CHECK(c.instances[0].best_mean == 1.0);
  CHECK(c.instances[0].reward == banditlab::RewardModel::gaussian());
  CHECK(c.horizon == 1'000'000);
  CHECK(c.repetitions == 100);
  CHECK(c.checkpoint_count == 50);
  CHECK(c.regret == banditlab::RegretKind::Pseudo);
  REQUIRE(c.policies.size() == 2);
  CHECK(c.policies[0].label == "mots");
  CHECK(c.policies[0].config.rho == 0.9999);
  CHECK(c.policies[0].config.alpha == 2.0);
  CHECK(c.policies[1].config.kind == banditlab::PolicyKind::TsGaussian);
}

TEST_CASE("policy objects and per-kind alpha") {
  const auto c = banditlab::cli::parse_config(R"({
    "K": 5, "eps": 0.1, "T": 100, "alpha": 3,
    "policies": ["moss", {"name": "mots", "label": "mots-rho-0.6", "rho": 0.6},
                 {"name": "mots-varrho", "m": 3, "rho_floor": 0.7}]})");
  REQUIRE(c.policies.size() == 3);
  CHECK(c.policies[0].config.alpha == 4.0);
  CHECK(c.policies[1].label == "mots-rho-0.6");
  CHECK(c.policies[1].config.rho == 0.6);
  CHECK(c.policies[1].config.alpha == 3.0);
  CHECK(c.policies[2].config.m == 3);
  CHECK(c.policies[2].config.rho_floor == 0.7);
}

TEST_CASE("full-size protocol config is accepted") {
  const auto c = banditlab::cli::parse_config(R"({
    "K": 50, "eps": [0.2, 0.1, 0.05], "T": 10000000, "reps": 6000,
    "policies": ["mots", "mots-j", "ts", "moss", "ucb"]})");
  CHECK(c.instances.size() == 3);
  CHECK(c.instances[2].eps == 0.05);
  CHECK(c.repetitions == 6000);
  CHECK(c.horizon == 10'000'000);
}

TEST_CASE("config validation errors name the field") {
  CHECK(field_of(R"({"K": 5, "eps": 0.1, "T": 100, "rho": 1.5,
                     "policies": ["mots"]})") == "rho");
  CHECK(field_of(R"({"K": 5, "eps": 0.1, "T": 100, "policies": ["mots"],
                     "colour": "red"})") == "colour");
  CHECK(field_of(R"({"eps": 0.1, "T": 100, "policies": ["mots"]})") == "K");
  CHECK(field_of(R"({"K": 5, "eps": 0.1, "T": 100,
                     "policies": ["thompson"]})") .find("policies") == 0);
  CHECK(field_of(R"({"K": 5, "eps": 0.1, "T": 2.5, "policies": ["ucb"]})") ==
        "T");
  CHECK(field_of(R"({"K": 5, "eps": 0.1, "T": 100, "reps": 0,
                     "policies": ["ucb"]})") == "reps");
  CHECK(field_of(R"({"K": 5, "eps": 0.1, "T": 100, "reward_model": "cauchy",
                     "policies": ["ucb"]})") == "reward_model");
  CHECK(field_of(R"({"K": 5, "eps": 0.1, "T": 100, "reward_model": "uniform",
                     "uniform_halfwidth": 3, "policies": ["ucb"]})") ==
        "uniform_halfwidth");
  CHECK(field_of(R"({"K": 5, "eps": 0.1, "T": 100,
                     "policies": ["ucb", "ucb"]})") == "policies");
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    banditlab::cli::parse_config("{\n  \"K\": 5,\n  \"eps\": ,\n}");
    FAIL("expected a parse error");
  } catch (const banditlab::ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() >= 9);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(banditlab::cli::parse_config("[1, 2]"), banditlab::ParseError);
}

TEST_CASE("config hash tracks semantic changes only") {
  const auto hash = [](const std::string& text) {
    return banditlab::cli::config_hash(banditlab::cli::parse_config(text));
  };
  const std::string base = hash(
      R"({"K": 5, "eps": 0.1, "T": 100, "policies": ["mots", "moss"]})");
  CHECK(base.size() == 16);
  CHECK(hash(R"({"policies": ["mots", "moss"], "T": 100, "eps": 0.1, "K": 5})") ==
        base);
  CHECK(hash(R"({"K": 5, "eps": 0.1, "T": 100, "policies": ["mots", "moss"],
                 "output": "elsewhere"})") == base);
  CHECK(hash(R"({"K": 5, "eps": 0.1, "T": 100, "rho": 0.9999,
                 "policies": ["mots", "moss"]})") == base);
  CHECK(hash(R"({"K": 5, "eps": 0.1, "T": 100, "rho": 0.9,
                 "policies": ["mots", "moss"]})") != base);
  CHECK(hash(R"({"K": 5, "eps": 0.1, "T": 101,
                 "policies": ["mots", "moss"]})") != base);
  CHECK(hash(R"({"K": 5, "eps": 0.1, "T": 100, "seed": 1,
                 "policies": ["mots", "moss"]})") != base);
  // alpha is not read by UCB, so it cannot change a UCB-only config.
  const std::string ucb =
      hash(R"({"K": 5, "eps": 0.1, "T": 100, "policies": ["ucb"]})");
  CHECK(hash(R"({"K": 5, "eps": 0.1, "T": 100, "alpha": 7,
                 "policies": ["ucb"]})") == ucb);
}

TEST_CASE("schema is valid JSON naming every key") {
  const auto schema = nlohmann::json::parse(banditlab::cli::config_schema());
  for (const char* key : {"K", "eps", "T", "reps", "seed", "policies", "rho",
                          "alpha", "checkpoints", "output"}) {
    CHECK(schema["properties"].contains(key));
  }
  std::string out;
  CHECK(run_cli({"schema"}, &out) == 0);
  CHECK(nlohmann::json::parse(out) == schema);
}

TEST_CASE("number formatting") {
  CHECK(banditlab::cli::format_double(0.1) == "0.10000000000000001");
  CHECK(banditlab::cli::format_double(3.0) == "3");
  CHECK(banditlab::cli::format_double(1234567.5) == "1234567.5");
  CHECK(banditlab::cli::format_double(-2.5e-20) == "-2.4999999999999999e-20");
}

TEST_CASE("run writes raw and aggregate tables") {
  const fs::path dir = fresh_dir("run");
  spit(dir / "config.json", kSmallConfig);
  std::string out, err;
  REQUIRE(run_cli({"run", "--config", (dir / "config.json").string(), "--out",
                   (dir / "a").string(), "--workers", "1"},
                  &out, &err) == 0);
  const auto raw = csv_rows(slurp(dir / "a" / "raw_K4_eps0.3.csv"));
  REQUIRE(raw.size() == 21);
  CHECK(raw[0] == std::vector<std::string>{"policy", "repetition", "checkpoint",
                                           "t", "pseudo_regret"});
  const auto agg = csv_rows(slurp(dir / "a" / "aggregate_K4_eps0.3.csv"));
  REQUIRE(agg.size() == 11);
  CHECK(agg[0] == std::vector<std::string>{"policy", "t", "mean_regret",
                                           "stderr", "reps"});

  // Aggregate mean equals the hand average of the raw rows.
  std::map<std::pair<std::string, std::string>, std::vector<double>> by_key;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    by_key[{raw[i][0], raw[i][3]}].push_back(std::stod(raw[i][4]));
  }
  for (std::size_t i = 1; i < agg.size(); ++i) {
    const auto& v = by_key.at({agg[i][0], agg[i][1]});
    REQUIRE(v.size() == 2);
    CHECK(std::stod(agg[i][2]) == doctest::Approx((v[0] + v[1]) / 2).epsilon(1e-15));
    CHECK(std::stod(agg[i][3]) ==
          doctest::Approx(std::fabs(v[0] - v[1]) / 2).epsilon(1e-12));
    CHECK(agg[i][4] == "2");
  }

  const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  CHECK(manifest["master_seed"] == 5);
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  CHECK(manifest.contains("code_version"));
  CHECK(manifest["files"].size() == 2);
  CHECK(err.find("progress:") != std::string::npos);
}

TEST_CASE("reruns are byte identical across worker counts and locales") {
  const fs::path dir = fresh_dir("rerun");
  spit(dir / "config.json", kSmallConfig);
  const std::string cfg = (dir / "config.json").string();
  REQUIRE(run_cli({"run", "--config", cfg, "--out", (dir / "a").string(),
                   "--workers", "1"}) == 0);
  REQUIRE(run_cli({"run", "--config", cfg, "--out", (dir / "b").string(),
                   "--workers", "8"}) == 0);
  const std::locale previous =
      std::locale::global(std::locale(std::locale::classic(), new CommaPunct));
  const int rc = run_cli({"run", "--config", cfg, "--out", (dir / "c").string(),
                          "--workers", "3"});
  std::locale::global(previous);
  REQUIRE(rc == 0);
  for (const char* f : {"raw_K4_eps0.3.csv", "aggregate_K4_eps0.3.csv",
                        "manifest.json"}) {
    CAPTURE(f);
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "c" / f));
  }
  const std::string raw = slurp(dir / "a" / "raw_K4_eps0.3.csv");
  CHECK(raw.find('\r') == std::string::npos);
}

TEST_CASE("seed override changes results and manifest") {
  const fs::path dir = fresh_dir("seed");
  spit(dir / "config.json", kSmallConfig);
  const std::string cfg = (dir / "config.json").string();
  REQUIRE(run_cli({"run", "--config", cfg, "--out", (dir / "a").string()}) == 0);
  REQUIRE(run_cli({"run", "--config", cfg, "--out", (dir / "b").string(),
                   "--seed", "6"}) == 0);
  CHECK(slurp(dir / "a" / "raw_K4_eps0.3.csv") !=
        slurp(dir / "b" / "raw_K4_eps0.3.csv"));
  const auto ma = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  const auto mb = nlohmann::json::parse(slurp(dir / "b" / "manifest.json"));
  CHECK(ma["config_hash"] != mb["config_hash"]);
  CHECK(mb["master_seed"] == 6);
}

TEST_CASE("run failures exit nonzero with a diagnostic") {
  const fs::path dir = fresh_dir("fail");
  std::string err;
  CHECK(run_cli({"run", "--config", (dir / "missing.json").string(), "--out",
                 (dir / "o").string()},
                nullptr, &err) == 1);
  CHECK(err.find("missing.json") != std::string::npos);

  spit(dir / "bad.json", R"({"K": 5, "eps": 0.1, "T": 100, "rho": 1.5,
                             "policies": ["mots"]})");
  CHECK(run_cli({"run", "--config", (dir / "bad.json").string(), "--out",
                 (dir / "o").string()},
                nullptr, &err) == 1);
  CHECK(err.find("rho") != std::string::npos);

  spit(dir / "blocker", "x");
  spit(dir / "ok.json", kSmallConfig);
  CHECK(run_cli({"run", "--config", (dir / "ok.json").string(), "--out",
                 (dir / "blocker" / "o").string()},
                nullptr, &err) == 1);
  CHECK(err.find("I/O") != std::string::npos);
  CHECK(run_cli({"run"}, nullptr, &err) != 0);
  CHECK(run_cli({"frobnicate"}, nullptr, &err) != 0);
}

TEST_CASE("worker resolution order") {
  CliCommand cmd;
  cmd.workers = 3;
  setenv("BANDITLAB_WORKERS", "5", 1);
  CHECK(banditlab::cli::resolve_workers(cmd) == 3);
  cmd.workers.reset();
  CHECK(banditlab::cli::resolve_workers(cmd) == 5);
  setenv("BANDITLAB_WORKERS", "lots", 1);
  CHECK(banditlab::cli::resolve_workers(cmd) >= 1);
  unsetenv("BANDITLAB_WORKERS");
  CHECK(banditlab::cli::resolve_workers(cmd) >= 1);
}

TEST_CASE("plot draws one curve per policy") {
  const fs::path dir = fresh_dir("plot");
  spit(dir / "aggregate_demo.csv",
       "policy,t,mean_regret,stderr,reps\n"
       "mots,10,1,0.5,4\nmots,100,5,1,4\nmots,1000,9,2,4\n"
       "ucb,10,2,0.5,4\nucb,100,8,1,4\nucb,1000,20,3,4\n");
  std::string out;
  REQUIRE(run_cli({"plot", "--out", dir.string()}, &out) == 0);
  const std::string svg = slurp(dir / "regret_demo.svg");
  CHECK(svg.rfind("<svg xmlns=", 0) == 0);
  CHECK(svg.find("http") == svg.find("http://www.w3.org/2000/svg"));

  std::size_t curves = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos;
       ++pos) {
    ++curves;
    const std::size_t start = svg.find("points=\"", pos) + 8;
    const std::string points = svg.substr(start, svg.find('"', start) - start);
    std::istringstream ps(points);
    std::string pair;
    double prev_x = -1e9, prev_y = 1e9;
    while (ps >> pair) {
      const double x = std::stod(pair.substr(0, pair.find(',')));
      const double y = std::stod(pair.substr(pair.find(',') + 1));
      // Regret grows, so SVG y (downwards) shrinks.
      CHECK(x > prev_x);
      CHECK(y < prev_y);
      prev_x = x;
      prev_y = y;
    }
  }
  CHECK(curves == 2);
}

TEST_CASE("plot errors") {
  const fs::path dir = fresh_dir("plot_errors");
  std::string err;
  CHECK(run_cli({"plot", "--out", dir.string()}, nullptr, &err) == 1);
  spit(dir / "aggregate_empty.csv", "policy,t,mean_regret,stderr,reps\n");
  CHECK(run_cli({"plot", "--out", dir.string()}, nullptr, &err) == 1);
  CHECK_FALSE(fs::exists(dir / "regret_empty.svg"));
  CHECK_THROWS_AS(banditlab::cli::render_regret_svg({}, "none"),
                  banditlab::ContractViolation);
  std::istringstream broken("policy,t,mean_regret,stderr,reps\nmots,ten,1,1,1\n");
  CHECK_THROWS_AS(banditlab::cli::read_aggregate_csv(broken), banditlab::IoError);
}

TEST_CASE("verify passes and detects a sigma fault") {
  const fs::path dir = fresh_dir("verify");
  std::string out, err;
  CHECK(run_cli({"verify", "--out", dir.string()}, &out, &err) == 0);
  CHECK(out.find("FAIL") == std::string::npos);
  CHECK(out.find("inverse_g_lower_bound_rho1") != std::string::npos);
  CHECK(fs::exists(dir / "verify.csv"));

  CHECK(run_cli({"verify", "--inject-sigma-fault", "1.1"}, &out, &err) == 1);
  CHECK(err.find("verification failed: j_tail") != std::string::npos);
}

TEST_CASE("installed binary runs") {
  const std::string cmd = std::string(BANDITLAB_CLI_PATH) + " schema > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
