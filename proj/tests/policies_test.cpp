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

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "banditlab/core.hpp"
#include "banditlab/errors.hpp"
#include "banditlab/policies.hpp"

using banditlab::BanditInstance;
using banditlab::PolicyConfig;
using banditlab::PolicyHooks;
using banditlab::PolicyKind;
using banditlab::RngStream;

namespace {

const PolicyKind kAllKinds[] = {PolicyKind::Mots,       PolicyKind::MotsVarRho,
                                PolicyKind::MotsJ,      PolicyKind::TsGaussian,
                                PolicyKind::Moss,       PolicyKind::Ucb};

PolicyConfig config_for(PolicyKind kind, std::size_t K, std::uint64_t T) {
  PolicyConfig c;
  c.kind = kind;
  c.arms = K;
  c.horizon = T;
  c.alpha = banditlab::default_alpha(kind);
  return c;
}

// Plays `steps` rounds against `instance`, returning the chosen arms.
std::vector<std::size_t> play(banditlab::Policy& policy,
                              const BanditInstance& instance, RngStream env,
                              std::uint64_t steps) {
  std::vector<std::size_t> arms;
  for (std::uint64_t t = 0; t < steps; ++t) {
    const std::size_t a = policy.select_arm();
    policy.observe(a, instance.sample_reward(a, env));
    arms.push_back(a);
  }
  return arms;
}

}  // namespace

TEST_CASE("policy names round-trip") {
  for (const PolicyKind k : kAllKinds) {
    CHECK(banditlab::parse_policy_kind(banditlab::policy_name(k)) == k);
  }
  CHECK(banditlab::policy_name(PolicyKind::MotsJ) == "mots-j");
  CHECK(banditlab::policy_name(PolicyKind::MotsVarRho) == "mots-varrho");
  CHECK(banditlab::policy_name(PolicyKind::TsGaussian) == "ts");
  CHECK_FALSE(banditlab::parse_policy_kind("MOTS").has_value());
  CHECK(banditlab::default_alpha(PolicyKind::Moss) == 4.0);
  CHECK(banditlab::default_alpha(PolicyKind::Mots) == 2.0);
}

TEST_CASE("config validation errors name the field") {
  const auto field_of = [](PolicyConfig c) {
    try {
      banditlab::validate(c);
    } catch (const banditlab::ConfigError& e) {
      return e.field();
    }
    return std::string("none");
  };
  PolicyConfig c = config_for(PolicyKind::Mots, 5, 100);
  CHECK(field_of(c) == "none");
  auto bad = c;
  bad.arms = 1;
  CHECK(field_of(bad) == "K");
  bad = c;
  bad.horizon = 4;
  CHECK(field_of(bad) == "T");
  bad = c;
  bad.alpha = 0.0;
  CHECK(field_of(bad) == "alpha");
  for (const double rho : {0.0, 1.0, 1.5, -0.2}) {
    bad = c;
    bad.rho = rho;
    CHECK(field_of(bad) == "rho");
  }
  bad = c;
  bad.m = 1;
  CHECK(field_of(bad) == "m");
  bad = c;
  bad.rho_floor = 1.0;
  CHECK(field_of(bad) == "rho_floor");
  CHECK_THROWS_AS(banditlab::make_policy(bad, RngStream(1, 1)),
                  banditlab::ConfigError);
}

TEST_CASE("soft warnings") {
  PolicyConfig c = config_for(PolicyKind::Mots, 5, 1000);
  c.alpha = 2.0;
  CHECK(banditlab::validate(c).size() == 1);
  c.alpha = 4.0;
  CHECK(banditlab::validate(c).empty());
  c.rho = 0.4;
  CHECK(banditlab::validate(c).size() == 1);

  PolicyConfig j = config_for(PolicyKind::MotsJ, 5, 1000);
  j.alpha = 2.0;
  CHECK(banditlab::validate(j).empty());
  j.alpha = 1.0;
  CHECK(banditlab::validate(j).size() == 1);

  PolicyConfig v = config_for(PolicyKind::MotsVarRho, 5, 10'000'000);
  v.alpha = 4.0;
  const auto w = banditlab::validate(v);
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("rho_raw") != std::string::npos);
}

TEST_CASE("rho schedule") {
  CHECK(banditlab::rho_from_iterated_log(160.0) == 0.5);
  CHECK(std::max(banditlab::rho_from_iterated_log(160.0), 0.51) == 0.51);
  CHECK(banditlab::rho_schedule_raw(10'000'000, 2) ==
        doctest::Approx(-2.793255373729183197).epsilon(1e-12));
  CHECK(banditlab::rho_schedule(10'000'000, 2, 0.51) == 0.51);
  for (const std::uint64_t T : {2ull, 1000ull, 1'000'000'000ull}) {
    CHECK(banditlab::rho_schedule(T, 2, 0.9) == 0.9);
    CHECK(banditlab::rho_schedule(T, 3, 0.9) == 0.9);
  }
  PolicyConfig v = config_for(PolicyKind::MotsVarRho, 5, 10'000'000);
  CHECK(banditlab::effective_rho(v) == 0.51);
  CHECK(banditlab::effective_rho(config_for(PolicyKind::TsGaussian, 5, 9)) ==
        1.0);
}

TEST_CASE("reset gives zeroed statistics") {
  auto p = banditlab::make_policy(config_for(PolicyKind::Mots, 50, 1000),
                                  RngStream(1, 2));
  CHECK(p->stats().step() == 0);
  CHECK(p->stats().arms() == 50);
  for (std::size_t i = 0; i < 50; ++i) CHECK(p->stats().count(i) == 0);
  CHECK(p->rng().position() == 0);
}

TEST_CASE("warm start is round robin and consumes no draws") {
  for (const PolicyKind k : kAllKinds) {
    CAPTURE(banditlab::policy_name(k));
    auto p = banditlab::make_policy(config_for(k, 5, 100), RngStream(3, 4));
    for (std::size_t t = 0; t < 5; ++t) {
      if (t == 3) {
        CHECK(p->stats().step() == 3);
        CHECK(p->select_arm() == 3);
        CHECK(p->rng().position() == 0);
      }
      const std::size_t a = p->select_arm();
      CHECK(a == t);
      p->observe(a, 0.5);
    }
    for (std::size_t i = 0; i < 5; ++i) CHECK(p->stats().count(i) == 1);
    CHECK(p->rng().position() == 0);
    p->select_arm();
    const bool sampling = k != PolicyKind::Moss && k != PolicyKind::Ucb;
    CHECK(p->rng().position() == (sampling ? 5u : 0u));
  }
}

TEST_CASE("calls past the horizon are contract violations") {
  for (const PolicyKind k : kAllKinds) {
    auto p = banditlab::make_policy(config_for(k, 2, 4), RngStream(1, 1));
    play(*p, BanditInstance({0.0, 1.0}), RngStream(1, 1, 1), 4);
    CHECK_THROWS_AS(p->select_arm(), banditlab::ContractViolation);
    CHECK_THROWS_AS(p->observe(0, 1.0), banditlab::ContractViolation);
  }
}

TEST_CASE("argmax of observed draws") {
  std::vector<double> thetas;
  PolicyHooks hooks;
  hooks.draw_observer = [&](std::size_t, double theta, double) {
    thetas.push_back(theta);
  };
  auto p = banditlab::make_policy(config_for(PolicyKind::Mots, 2, 1000),
                                  RngStream(17, 5), hooks);
  p->observe(p->select_arm(), 0.7);
  p->observe(p->select_arm(), 0.4);
  for (int i = 0; i < 200; ++i) {
    thetas.clear();
    const std::size_t a = p->select_arm();
    REQUIRE(thetas.size() == 2);
    CHECK(a == (thetas[1] > thetas[0] ? 1u : 0u));
  }
}

TEST_CASE("threshold collapses to the mean for well-sampled arms") {
  const std::uint64_t T = 100;
  std::vector<double> seen;
  bool recording = false;
  PolicyHooks hooks;
  hooks.draw_observer = [&](std::size_t arm, double theta, double tau) {
    if (recording && arm == 0) {
      seen.push_back(theta);
      CHECK(tau == 0.0);
    }
  };
  for (const PolicyKind k : {PolicyKind::Mots, PolicyKind::MotsJ}) {
    recording = false;
    auto p = banditlab::make_policy(config_for(k, 2, T), RngStream(2, 9), hooks);
    // Warm start, then 49 more zero rewards on arm 0: T_0 = 50 = T/K.
    p->observe(p->select_arm(), 0.0);
    p->observe(p->select_arm(), 0.0);
    for (int i = 0; i < 49; ++i) {
      p->select_arm();
      p->observe(0, 0.0);
    }
    recording = true;
    for (int i = 0; i < 40; ++i) p->select_arm();
  }
  CHECK(seen.size() == 80);
  for (const double theta : seen) CHECK(theta <= 0.0);
}

TEST_CASE("symmetric arms are chosen equally often") {
  PolicyConfig c = config_for(PolicyKind::Mots, 2, 1'000'000'000);
  c.rho = 0.9999;
  c.alpha = 2.0;
  auto p = banditlab::make_policy(c, RngStream(2718, 28));
  p->observe(p->select_arm(), 0.0);
  p->observe(p->select_arm(), 0.0);
  const int n = 100'000;
  int zeros = 0;
  for (int i = 0; i < n; ++i) zeros += p->select_arm() == 0 ? 1 : 0;
  CHECK(std::fabs(static_cast<double>(zeros) / n - 0.5) <
        3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("same stream gives the same decisions") {
  const BanditInstance inst({0.2, 0.5, 0.45, 0.1});
  for (const PolicyKind k : kAllKinds) {
    auto a = banditlab::make_policy(config_for(k, 4, 3000), RngStream(5, 5));
    auto b = banditlab::make_policy(config_for(k, 4, 3000), RngStream(5, 5));
    CHECK(play(*a, inst, RngStream(5, 5, 1), 3000) ==
          play(*b, inst, RngStream(5, 5, 1), 3000));
  }
}

TEST_CASE("clipped draws never exceed the threshold") {
  const BanditInstance inst({0.0, 0.3, 0.6, 0.1, 0.5});
  for (const PolicyKind k : {PolicyKind::Mots, PolicyKind::MotsVarRho,
                             PolicyKind::MotsJ}) {
    std::uint64_t draws = 0;
    std::uint64_t clipped = 0;
    bool ok = true;
    PolicyHooks hooks;
    hooks.draw_observer = [&](std::size_t, double theta, double tau) {
      ++draws;
      if (theta == tau) ++clipped;
      if (!(theta <= tau)) ok = false;
    };
    auto p = banditlab::make_policy(config_for(k, 5, 20'000), RngStream(6, 1),
                                    hooks);
    play(*p, inst, RngStream(6, 1, 1), 20'000);
    CHECK(ok);
    CHECK(draws == 5 * (20'000 - 5));
    CHECK(clipped > 0);
  }
}

TEST_CASE("unclipped MOTS with rho 1 matches TS") {
  const BanditInstance inst({0.1, 0.4, 0.35});
  PolicyConfig mots = config_for(PolicyKind::Mots, 3, 5000);
  mots.rho = 1.0;
  PolicyHooks hooks;
  hooks.disable_clipping = true;
  hooks.skip_validation = true;
  auto a = banditlab::make_policy(mots, RngStream(9, 1), hooks);
  auto b = banditlab::make_policy(config_for(PolicyKind::TsGaussian, 3, 5000),
                                  RngStream(9, 1));
  CHECK(play(*a, inst, RngStream(9, 1, 1), 5000) ==
        play(*b, inst, RngStream(9, 1, 1), 5000));
}

TEST_CASE("skipping arms that cannot win does not change decisions") {
  std::vector<double> means(20, 0.5);
  means[7] = 0.8;
  const BanditInstance inst(means);
  for (const PolicyKind k : {PolicyKind::Mots, PolicyKind::MotsVarRho,
                             PolicyKind::MotsJ, PolicyKind::TsGaussian}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      PolicyHooks full;
      full.disable_pruning = true;
      auto a = banditlab::make_policy(config_for(k, 20, 20'000),
                                      RngStream(seed, 3), full);
      auto b = banditlab::make_policy(config_for(k, 20, 20'000),
                                      RngStream(seed, 3));
      CHECK(play(*a, inst, RngStream(seed, 3, 1), 20'000) ==
            play(*b, inst, RngStream(seed, 3, 1), 20'000));
      CHECK(a->rng().position() == b->rng().position());
    }
  }
}

TEST_CASE("index policies prefer the larger mean at equal counts") {
  for (const PolicyKind k : {PolicyKind::Moss, PolicyKind::Ucb}) {
    for (const double gap : {1e-9, 0.01, 3.0}) {
      auto p = banditlab::make_policy(config_for(k, 3, 1000), RngStream(1, 1));
      p->observe(p->select_arm(), 0.2);
      p->observe(p->select_arm(), 0.2 + gap);
      p->observe(p->select_arm(), 0.2 - gap);
      CHECK(p->select_arm() == 1);
    }
  }
}

TEST_CASE("index ties go to the lowest arm") {
  for (const PolicyKind k : {PolicyKind::Moss, PolicyKind::Ucb}) {
    auto p = banditlab::make_policy(config_for(k, 4, 1000), RngStream(1, 1));
    for (int i = 0; i < 4; ++i) p->observe(p->select_arm(), i == 0 ? 0.0 : 1.0);
    CHECK(p->select_arm() == 1);
  }
}

TEST_CASE("clipped ties go to the lowest arm") {
  // Equal statistics on every arm give equal thresholds, so draws that clip
  // tie exactly.
  std::vector<double> thetas;
  PolicyHooks hooks;
  hooks.draw_observer = [&](std::size_t, double theta, double) {
    thetas.push_back(theta);
  };
  PolicyConfig c = config_for(PolicyKind::Mots, 3, 400);
  auto p = banditlab::make_policy(c, RngStream(4, 4), hooks);
  for (int i = 0; i < 3; ++i) p->observe(p->select_arm(), 0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (int r = 0; r < 99; ++r) p->observe(i, 0.0);
  }
  int ties = 0;
  for (int call = 0; call < 100; ++call) {
    thetas.clear();
    const std::size_t a = p->select_arm();
    REQUIRE(thetas.size() == 3);
    std::size_t expected = 0;
    for (std::size_t i = 1; i < 3; ++i) {
      if (thetas[i] > thetas[expected]) expected = i;
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (i != expected && thetas[i] == thetas[expected]) ++ties;
    }
    CHECK(a == expected);
  }
  CHECK(ties > 0);
}
