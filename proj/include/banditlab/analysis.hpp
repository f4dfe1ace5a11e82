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

#ifndef BANDITLAB_ANALYSIS_HPP_
#define BANDITLAB_ANALYSIS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "banditlab/core.hpp"
#include "banditlab/distributions.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

struct AggregateCurve {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> mean;
  // Sample standard deviation / sqrt(repetitions); 0 for a single trace.
  std::vector<double> std_error;
  std::size_t repetitions = 0;
};

/// Pointwise mean and standard error of traces sharing one checkpoint
/// vector. Values are summed in sorted order, so the result does not depend
/// on the order of `traces`.
AggregateCurve aggregate(std::span<const RegretTrace> traces);

// Two-sided Kolmogorov-Smirnov distance between the empirical CDF of
// `sorted_samples` (ascending) and `cdf`.
double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf);

// 1.63 / sqrt(n): asymptotic KS critical value at level 0.01.
double ks_critical_value_01(std::size_t n);

struct InverseGEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double cap = 0.0;
  std::uint64_t samples = 0;
};

/// Monte Carlo estimate of E[min(1 / G' - 1, cap)], where
/// mu_hat ~ N(mu1, 1 / s) and G' = 1 - Phi(mu1 - eps; mu_hat, 1 / (rho s))
/// is the probability that a N(mu_hat, 1/(rho s)) draw exceeds mu1 - eps.
/// Uses one normal draw of `rng` per sample.
InverseGEstimate estimate_inverse_g(double mu1, double eps, double rho,
                                    std::uint64_t s, std::uint64_t n_mc,
                                    double cap, RngStream& rng);

/// Partial sums sum_{s'=1..s} E[min(1/G'_{s'} - 1, cap)] for s = 1..s_max,
/// each term estimated independently with n_mc samples. Entry s-1 holds the
/// partial sum up to s; std_error combines the terms' errors in quadrature.
std::vector<InverseGEstimate> cumulative_inverse_g(double mu1, double eps,
                                                   double rho,
                                                   std::uint64_t s_max,
                                                   std::uint64_t n_mc,
                                                   double cap, RngStream& rng);

// Lower bound exp(-s eps^2 / 2) / (s eps^2) on E[1/G' - 1] at rho = 1.
double inverse_g_lower_bound(double eps, std::uint64_t s);

struct SlopeEstimate {
  // Mean regret at the final checkpoint divided by ln(final checkpoint).
  double slope = 0.0;
  // sum over suboptimal arms of 2 / (rho * Delta_i).
  double target = 0.0;
};

// Requires a final checkpoint >= 10^4 (ContractViolation otherwise).
SlopeEstimate asymptotic_slope(const AggregateCurve& curve,
                               const BanditInstance& instance, double rho);

enum class Tail { Upper, Lower };

struct TailCheck {
  double estimate = 0.0;
  // exp(-z^2/2) / 2
  double target = 0.0;
  // Binomial standard error sqrt(target (1 - target) / n).
  double std_error = 0.0;
  bool pass = false;
};

/// Empirical P(Z > mu + z sigma) (or P(Z < mu - z sigma)) against the exact
/// J tail. Passes iff within 3 standard errors. Needs at least 10^4 samples.
TailCheck tail_check(std::span<const double> samples, double z,
                     const JParams& params, Tail tail = Tail::Upper);

struct LemmaCheckReport {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;
  double estimate = 0.0;
  double reference = 0.0;
  // How estimate relates to reference when passing, e.g. "< ", "within 3se".
  std::string criterion;
  bool pass = false;
};

struct VerifyOptions {
  std::uint64_t seed = 20240607;
  std::uint64_t samples = 1'000'000;
  // Multiplies the J sampler's sigma; 1.0 in production. Used to check that
  // the battery detects a mis-scaled sampler.
  double sigma_fault = 1.0;
  std::uint64_t lemma4_samples_per_s = 100'000;
  double cap = 1e6;
};

/// The statistical battery: J tails and KS, clipped-Gaussian atom mass and
/// KS of its continuous part, the rho = 1 lower bound on E[1/G' - 1] and
/// boundedness of its partial sums at rho = 0.75.
std::vector<LemmaCheckReport> run_verification_battery(
    const VerifyOptions& options = {});

}  // namespace banditlab

#endif  // BANDITLAB_ANALYSIS_HPP_
