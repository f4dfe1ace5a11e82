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

#ifndef BANDITLAB_DISTRIBUTIONS_HPP_
#define BANDITLAB_DISTRIBUTIONS_HPP_

#include <cmath>
#include <cstdint>
#include <limits>

#include "banditlab/rng.hpp"

namespace banditlab {

// max(0, ln x). Throws DomainError for x <= 0.
double log_plus(double x);

// Iterated logarithm clamped below at e: ilog(0, x) = x and
// ilog(m, x) = max(ln ilog(m-1, x), e). Throws DomainError for x <= 0.
double ilog(unsigned m, double x);

/// Upper end of the confidence range of an arm pulled `pulls` times:
///
///   mu_hat + sqrt((alpha / pulls) * log+(horizon / (arms * pulls)))
///
/// Returns mu_hat exactly once pulls >= horizon / arms.
double clip_threshold(double mu_hat, std::uint64_t pulls, std::uint64_t horizon,
                      std::uint64_t arms, double alpha);

// Standard normal CDF, Phi(x) = erfc(-x / sqrt 2) / 2.
double normal_cdf(double x);
// CDF of Normal(mean, variance).
double normal_cdf(double x, double mean, double variance);

namespace detail {

inline double poly8(const double (&c)[8], double r) {
  return ((((((c[7] * r + c[6]) * r + c[5]) * r + c[4]) * r + c[3]) * r +
           c[2]) * r + c[1]) * r + c[0];
}

}  // namespace detail

/// Inverse of the standard normal CDF for u in (0, 1), Wichura's AS241
/// (PPND16), relative accuracy about 1e-16. Sign-exact: the result is <= 0
/// for u <= 1/2 and >= 0 otherwise. No argument checking; see
/// normal_quantile_checked.
inline double normal_quantile(double u) {
  static constexpr double a[8] = {
      3.3871328727963666080e0,  1.3314166789178437745e+2,
      1.9715909503065514427e+3, 1.3731693765509461125e+4,
      4.5921953931549871457e+4, 6.7265770927008700853e+4,
      3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr double b[8] = {
      1.0,                      4.2313330701600911252e+1,
      6.8718700749205790830e+2, 5.3941960214247511077e+3,
      2.1213794301586595867e+4, 3.9307895800092710610e+4,
      2.8729085735721942674e+4, 5.2264952788528545610e+3};
  static constexpr double c[8] = {
      1.42343711074968357734e0,  4.63033784615654529590e0,
      5.76949722146069140550e0,  3.64784832476320460504e0,
      1.27045825245236838258e0,  2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[8] = {
      1.0,                       2.05319162663775882187e0,
      1.67638483018380384940e0,  6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static constexpr double e[8] = {
      6.65790464350110377720e0,  5.46378491116411436990e0,
      1.78482653991729133580e0,  2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[8] = {
      1.0,                       5.99832206555887937690e-1,
      1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  const double q = u - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * detail::poly8(a, r) / detail::poly8(b, r);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? u : 1.0 - u));
  double z;
  if (r <= 5.0) {
    r -= 1.6;
    z = detail::poly8(c, r) / detail::poly8(d, r);
  } else {
    r -= 5.0;
    z = detail::poly8(e, r) / detail::poly8(f, r);
  }
  return q < 0.0 ? -z : z;
}

// normal_quantile with a DomainError for u outside (0, 1).
double normal_quantile_checked(double u);

// One standard normal draw; consumes exactly one word of `rng`.
inline double standard_normal(RngStream& rng) {
  return normal_quantile(rng.next_uniform());
}

/// Clipped Gaussian: Normal(mu_hat, variance) truncated from above at tau,
/// with the excess mass 1 - Phi((tau - mu_hat) / sqrt(variance)) sitting as
/// an atom on tau.
struct ClipSpec {
  double mu_hat = 0.0;
  double variance = 1.0;
  double tau = std::numeric_limits<double>::infinity();
};

// Throws DomainError unless variance > 0 and tau is not NaN.
void validate(const ClipSpec& spec);

// min(mu_hat + sqrt(variance) * z, tau) with z = standard_normal(rng).
double sample_clipped_gaussian(const ClipSpec& spec, RngStream& rng);

// Probability mass of the atom at tau.
double clipped_atom_mass(const ClipSpec& spec);

/// Two-sided Rayleigh-type law J(mu, sigma2) with density
///   |x - mu| / (2 sigma2) * exp(-(x - mu)^2 / (2 sigma2))
/// and exact tails P(Z > mu + z sigma) = P(Z < mu - z sigma) = exp(-z^2/2)/2.
struct JParams {
  double mu = 0.0;
  double sigma2 = 1.0;

  double sigma() const { return std::sqrt(sigma2); }
};

// Throws DomainError unless sigma2 > 0 and mu is finite.
void validate(const JParams& p);

double j_pdf(double x, const JParams& p);
double j_cdf(double x, const JParams& p);
// Inverse CDF; u outside (0, 1) is a DomainError. Arguments below the
// smallest normal double are clamped to it before taking the logarithm.
double j_quantile(double u, const JParams& p);
// j_quantile of one uniform from `rng` (exactly one word).
double sample_j(const JParams& p, RngStream& rng);

namespace detail {

// Unchecked inverse-CDF transform shared by j_quantile and the policies.
inline double j_transform(double u, double mu, double sigma) {
  constexpr double kMinArg = std::numeric_limits<double>::min();
  if (u <= 0.5) {
    const double v = u < kMinArg ? kMinArg : u;
    return mu - sigma * std::sqrt(-2.0 * std::log(2.0 * v));
  }
  double w = 1.0 - u;
  if (w < kMinArg) w = kMinArg;
  return mu + sigma * std::sqrt(-2.0 * std::log(2.0 * w));
}

}  // namespace detail

}  // namespace banditlab

#endif  // BANDITLAB_DISTRIBUTIONS_HPP_
