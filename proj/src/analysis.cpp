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

#include "banditlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "banditlab/errors.hpp"

namespace banditlab {

namespace {

// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::fabs(sum_) >= std::fabs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

AggregateCurve aggregate(std::span<const RegretTrace> traces) {
  if (traces.empty()) throw ContractViolation("aggregate: no traces");
  const auto& checkpoints = traces.front().checkpoints;
  for (const auto& tr : traces) {
    if (tr.checkpoints != checkpoints ||
        tr.cumulative_regret.size() != checkpoints.size()) {
      throw ContractViolation("aggregate: traces have mismatched checkpoints");
    }
  }

  const std::size_t n = traces.size();
  AggregateCurve curve;
  curve.checkpoints = checkpoints;
  curve.repetitions = n;
  curve.mean.reserve(checkpoints.size());
  curve.std_error.reserve(checkpoints.size());

  std::vector<double> column(n);
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    for (std::size_t r = 0; r < n; ++r) column[r] = traces[r].cumulative_regret[c];
    std::sort(column.begin(), column.end());
    CompensatedSum sum;
    for (const double v : column) sum.add(v);
    const double mean = sum.value() / static_cast<double>(n);
    double se = 0.0;
    if (n > 1) {
      CompensatedSum sq;
      for (const double v : column) sq.add((v - mean) * (v - mean));
      se = std::sqrt(sq.value() / static_cast<double>(n - 1)) /
           std::sqrt(static_cast<double>(n));
    }
    curve.mean.push_back(mean);
    curve.std_error.push_back(se);
  }
  return curve;
}

double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_samples.size();
  if (n == 0) throw ContractViolation("ks_statistic: no samples");
  const double dn = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted_samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / dn - f,
                  f - static_cast<double>(i) / dn});
  }
  return d;
}

double ks_critical_value_01(std::size_t n) {
  return 1.63 / std::sqrt(static_cast<double>(n));
}

InverseGEstimate estimate_inverse_g(double mu1, double eps, double rho,
                                    std::uint64_t s, std::uint64_t n_mc,
                                    double cap, RngStream& rng) {
  if (!(cap >= 1.0)) throw ContractViolation("estimate_inverse_g: cap must be >= 1");
  if (s == 0 || n_mc == 0) {
    throw ContractViolation("estimate_inverse_g: s and n_mc must be >= 1");
  }
  if (!(rho > 0.0)) throw ContractViolation("estimate_inverse_g: rho must be > 0");

  const double sd_mean = 1.0 / std::sqrt(static_cast<double>(s));
  const double scale = std::sqrt(rho * static_cast<double>(s)) / std::numbers::sqrt2;
  CompensatedSum sum;
  CompensatedSum sum_sq;
  for (std::uint64_t k = 0; k < n_mc; ++k) {
    const double mu_hat = mu1 + sd_mean * standard_normal(rng);
    // G' = P(N(mu_hat, 1/(rho s)) > mu1 - eps) = Phi(x), 1 - G' = Phi(-x).
    const double x = (mu_hat - (mu1 - eps)) * scale;
    const double g = 0.5 * std::erfc(-x);
    const double one_minus_g = 0.5 * std::erfc(x);
    const double value = g > 0.0 ? std::min(one_minus_g / g, cap) : cap;
    sum.add(value);
    sum_sq.add(value * value);
  }
  const double n = static_cast<double>(n_mc);
  const double mean = sum.value() / n;
  const double var = n > 1 ? std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1)) : 0.0;
  return {mean, std::sqrt(var / n), cap, n_mc};
}

std::vector<InverseGEstimate> cumulative_inverse_g(double mu1, double eps,
                                                   double rho,
                                                   std::uint64_t s_max,
                                                   std::uint64_t n_mc,
                                                   double cap, RngStream& rng) {
  std::vector<InverseGEstimate> partial;
  partial.reserve(s_max);
  double total = 0.0;
  double var = 0.0;
  for (std::uint64_t s = 1; s <= s_max; ++s) {
    const InverseGEstimate term = estimate_inverse_g(mu1, eps, rho, s, n_mc, cap, rng);
    total += term.estimate;
    var += term.std_error * term.std_error;
    partial.push_back({total, std::sqrt(var), cap, n_mc * s});
  }
  return partial;
}

double inverse_g_lower_bound(double eps, std::uint64_t s) {
  const double se2 = static_cast<double>(s) * eps * eps;
  return std::exp(-se2 / 2.0) / se2;
}

SlopeEstimate asymptotic_slope(const AggregateCurve& curve,
                               const BanditInstance& instance, double rho) {
  if (curve.checkpoints.empty() || curve.checkpoints.back() < 10'000) {
    throw ContractViolation("asymptotic_slope: final checkpoint must be >= 10^4");
  }
  SlopeEstimate out;
  out.slope = curve.mean.back() / std::log(static_cast<double>(curve.checkpoints.back()));
  for (const double gap : instance.gaps()) {
    if (gap > 0.0) out.target += 2.0 / (rho * gap);
  }
  return out;
}

TailCheck tail_check(std::span<const double> samples, double z,
                     const JParams& params, Tail tail) {
  validate(params);
  if (samples.size() < 10'000) {
    throw ContractViolation("tail_check: need at least 10^4 samples");
  }
  if (!(z > 0.0)) throw ContractViolation("tail_check: z must be > 0");
  const double sigma = params.sigma();
  const double upper = params.mu + z * sigma;
  const double lower = params.mu - z * sigma;
  std::size_t hits = 0;
  for (const double x : samples) {
    if (tail == Tail::Upper ? x > upper : x < lower) ++hits;
  }
  const double n = static_cast<double>(samples.size());
  TailCheck check;
  check.estimate = static_cast<double>(hits) / n;
  check.target = 0.5 * std::exp(-z * z / 2.0);
  check.std_error = std::sqrt(check.target * (1.0 - check.target) / n);
  check.pass = std::fabs(check.estimate - check.target) <= 3.0 * check.std_error;
  return check;
}

std::vector<LemmaCheckReport> run_verification_battery(const VerifyOptions& options) {
  std::vector<LemmaCheckReport> reports;
  const std::size_t n = options.samples;
  const JParams unit{0.0, 1.0};

  // J sampler: KS and exact two-sided tails.
  {
    RngStream rng(options.seed, mix64(1));
    const JParams sampled{0.0, options.sigma_fault * options.sigma_fault};
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_j(sampled, rng);

    for (const Tail tail : {Tail::Upper, Tail::Lower}) {
      for (const double z : {0.5, 1.0, 2.0, 3.0}) {
        const TailCheck tc = tail_check(xs, z, unit, tail);
        reports.push_back({tail == Tail::Upper ? "j_tail_upper" : "j_tail_lower",
                           {{"z", z}, {"n", static_cast<double>(n)}},
                           tc.estimate, tc.target, "|est-ref| <= 3se", tc.pass});
      }
    }
    std::sort(xs.begin(), xs.end());
    const double d = ks_statistic(xs, [&](double x) { return j_cdf(x, unit); });
    const double crit = ks_critical_value_01(n);
    reports.push_back({"j_ks", {{"n", static_cast<double>(n)}}, d, crit, "est < ref",
                       d < crit});
  }

  // Clipped Gaussian N(0, 1) clipped at tau = 1: atom mass and sub-tau law.
  {
    RngStream rng(options.seed, mix64(2));
    const ClipSpec spec{0.0, 1.0, 1.0};
    std::vector<double> below;
    below.reserve(n);
    std::size_t atoms = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = sample_clipped_gaussian(spec, rng);
      if (x == spec.tau) {
        ++atoms;
      } else {
        below.push_back(x);
      }
    }
    const double target = clipped_atom_mass(spec);
    const double est = static_cast<double>(atoms) / static_cast<double>(n);
    const double se = std::sqrt(target * (1.0 - target) / static_cast<double>(n));
    reports.push_back({"clipped_atom_mass", {{"tau", 1.0}, {"n", static_cast<double>(n)}},
                       est, target, "|est-ref| <= 3se",
                       std::fabs(est - target) <= 3.0 * se});

    std::sort(below.begin(), below.end());
    const double mass_below = normal_cdf(spec.tau);
    const double d = ks_statistic(below, [&](double x) { return normal_cdf(x) / mass_below; });
    const double crit = ks_critical_value_01(below.size());
    reports.push_back({"clipped_sub_tau_ks",
                       {{"tau", 1.0}, {"n", static_cast<double>(below.size())}}, d, crit,
                       "est < ref", d < crit});
  }

  // rho = 1 lower bound.
  {
    RngStream rng(options.seed, mix64(3));
    const double eps = 1.0;
    const std::uint64_t s = 4;
    const InverseGEstimate g = estimate_inverse_g(0.0, eps, 1.0, s, n, options.cap, rng);
    const double bound = inverse_g_lower_bound(eps, s);
    reports.push_back({"inverse_g_lower_bound_rho1",
                       {{"s", 4.0}, {"eps", eps}, {"rho", 1.0}, {"cap", options.cap},
                        {"n_mc", static_cast<double>(n)}},
                       g.estimate, bound, "est >= ref - 3se",
                       g.estimate >= bound - 3.0 * g.std_error});
  }

  // rho = 0.75: partial sums over s stop growing.
  {
    RngStream rng(options.seed, mix64(4));
    const auto partial = cumulative_inverse_g(0.0, 0.5, 0.75, 1000,
                                              options.lemma4_samples_per_s,
                                              options.cap, rng);
    const double at10 = partial[9].estimate;
    const double at100 = partial[99].estimate;
    const double at1000 = partial[999].estimate;
    const double hi = std::max({at10, at100, at1000});
    const double lo = std::min({at10, at100, at1000});
    const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    reports.push_back({"inverse_g_partial_sums_bounded",
                       {{"rho", 0.75}, {"eps", 0.5}, {"sum_s10", at10},
                        {"sum_s100", at100}, {"sum_s1000", at1000},
                        {"cap", options.cap},
                        {"n_mc_per_s", static_cast<double>(options.lemma4_samples_per_s)}},
                       ratio, 2.0, "max/min < ref", ratio < 2.0});
  }
  return reports;
}

}  // namespace banditlab
