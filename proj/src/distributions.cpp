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

#include "banditlab/distributions.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "banditlab/errors.hpp"

namespace banditlab {

double log_plus(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_plus: argument must be > 0, got " +
                      std::to_string(x));
  }
  return std::max(0.0, std::log(x));
}

double ilog(unsigned m, double x) {
  if (!(x > 0.0)) {
    throw DomainError("ilog: argument must be > 0, got " + std::to_string(x));
  }
  double value = x;
  for (unsigned i = 0; i < m; ++i) {
    value = std::max(std::log(value), std::numbers::e);
  }
  return value;
}

double clip_threshold(double mu_hat, std::uint64_t pulls, std::uint64_t horizon,
                      std::uint64_t arms, double alpha) {
  if (pulls == 0 || arms == 0 || horizon == 0) {
    throw ContractViolation("clip_threshold: pulls, arms and horizon must be >= 1");
  }
  const double s = static_cast<double>(pulls);
  const double ratio =
      static_cast<double>(horizon) / (static_cast<double>(arms) * s);
  return mu_hat + std::sqrt(alpha / s * log_plus(ratio));
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

double normal_cdf(double x, double mean, double variance) {
  return normal_cdf((x - mean) / std::sqrt(variance));
}

double normal_quantile_checked(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("normal_quantile: u must lie in (0, 1)");
  }
  return normal_quantile(u);
}

void validate(const ClipSpec& spec) {
  if (!(spec.variance > 0.0) || !std::isfinite(spec.variance)) {
    throw DomainError("ClipSpec: variance must be positive and finite");
  }
  if (std::isnan(spec.tau) || std::isnan(spec.mu_hat)) {
    throw DomainError("ClipSpec: mu_hat and tau must not be NaN");
  }
}

double sample_clipped_gaussian(const ClipSpec& spec, RngStream& rng) {
  validate(spec);
  const double draw =
      spec.mu_hat + std::sqrt(spec.variance) * standard_normal(rng);
  return std::min(draw, spec.tau);
}

double clipped_atom_mass(const ClipSpec& spec) {
  validate(spec);
  return 1.0 - normal_cdf(spec.tau, spec.mu_hat, spec.variance);
}

void validate(const JParams& p) {
  if (!(p.sigma2 > 0.0) || !std::isfinite(p.sigma2)) {
    throw DomainError("JParams: sigma2 must be positive and finite");
  }
  if (!std::isfinite(p.mu)) {
    throw DomainError("JParams: mu must be finite");
  }
}

double j_pdf(double x, const JParams& p) {
  validate(p);
  const double d = x - p.mu;
  return std::fabs(d) / (2.0 * p.sigma2) * std::exp(-d * d / (2.0 * p.sigma2));
}

double j_cdf(double x, const JParams& p) {
  validate(p);
  const double d = x - p.mu;
  const double half_tail = 0.5 * std::exp(-d * d / (2.0 * p.sigma2));
  return d <= 0.0 ? half_tail : 1.0 - half_tail;
}

double j_quantile(double u, const JParams& p) {
  validate(p);
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("j_quantile: u must lie in (0, 1)");
  }
  return detail::j_transform(u, p.mu, p.sigma());
}

double sample_j(const JParams& p, RngStream& rng) {
  validate(p);
  return detail::j_transform(rng.next_uniform(), p.mu, p.sigma());
}

}  // namespace banditlab
