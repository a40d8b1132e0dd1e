#pragma once

// Scalar distributions for the hazard-potential framework: the standard
// Gaussian CDF (plus a log-space variant), the inverse Gaussian first-passage
// law of a drifted Wiener process to a fixed level, the driftless reflection
// law, and the exponential-threshold mixture lifetime CDF.

#include <cmath>
#include <limits>

#include "hazpot/errors.hpp"
#include "hazpot/quadrature.hpp"

namespace hazpot {

// Drift eta and diffusion sigma2 of a Wiener marker process.  eta = 0 is a
// legal value here (the reflection law needs it); entry points that require
// a strictly positive drift check it themselves.
struct WienerParams {
  double eta;
  double sigma2;

  WienerParams(double eta_, double sigma2_) : eta(eta_), sigma2(sigma2_) {
    if (!std::isfinite(eta) || !std::isfinite(sigma2) || !(sigma2 > 0.0))
      throw domain_error("WienerParams: require finite eta and sigma2 > 0");
  }
};

// (mu, lambda) parameterization of the inverse Gaussian law;
// mu = E(T_x), lambda*... see ig_params_from_threshold.
struct IgParams {
  double mu;
  double lambda;

  IgParams(double mu_, double lambda_) : mu(mu_), lambda(lambda_) {
    if (!std::isfinite(mu) || !std::isfinite(lambda) || !(mu > 0.0) ||
        !(lambda > 0.0))
      throw domain_error("IgParams: require mu > 0 and lambda > 0, finite");
  }
};

inline constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
inline constexpr double kLogSqrt2Pi = 0.9189385332046727417803297364056176;

inline double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z - kLogSqrt2Pi);
}

// Phi(z) via the complementary error function; absolute error well below
// the 1e-12 contract over the full double range.
inline double std_normal_cdf(double z) {
  if (!std::isfinite(z)) throw domain_error("std_normal_cdf: non-finite z");
  return 0.5 * std::erfc(-z * kInvSqrt2);
}

// log Phi(z) without underflow.  erfc stays normal down to z ~ -37.5; below
// that use the asymptotic Mills-ratio expansion
//   Phi(z) = phi(z)/(-z) * (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8 - ...).
inline double std_normal_logcdf(double z) {
  if (!std::isfinite(z)) throw domain_error("std_normal_logcdf: non-finite z");
  if (z > -37.0) {
    return std::log(0.5 * std::erfc(-z * kInvSqrt2));
  }
  const double z2 = z * z;
  double series = 1.0 - 1.0 / z2 * (1.0 - 3.0 / z2 * (1.0 - 5.0 / z2 *
                  (1.0 - 7.0 / z2)));
  return -0.5 * z2 - kLogSqrt2Pi - std::log(-z) + std::log(series);
}

// mu = x/eta, lambda = x^2/sigma^2.  eta <= 0 has an infinite mean
// first-passage time and is rejected.
inline IgParams ig_params_from_threshold(double x, const WienerParams& w) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw domain_error("ig_params_from_threshold: require x > 0");
  if (!(w.eta > 0.0))
    throw domain_error(
        "ig_params_from_threshold: require eta > 0 (mean passage time is "
        "infinite otherwise)");
  return IgParams(x / w.eta, x * x / w.sigma2);
}

// F_x(t | eta, sigma) = Phi(eta*sqrt(t)/sigma - x/(sigma*sqrt(t)))
//                     + exp(2*eta*x/sigma^2) * Phi(-eta*sqrt(t)/sigma - x/(sigma*sqrt(t))).
// The second term is evaluated as exp(arg + logPhi) so large 2*eta*x/sigma^2
// never overflows: algebraically arg + logPhi <= -z1^2/2.
inline double ig_cdf(double t, double x, const WienerParams& w) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw domain_error("ig_cdf: require x > 0");
  if (!(w.eta > 0.0)) throw domain_error("ig_cdf: require eta > 0");
  if (!(t >= 0.0)) throw domain_error("ig_cdf: require t >= 0");
  if (t == std::numeric_limits<double>::infinity()) return 1.0;
  if (t == 0.0) return 0.0;

  const double sigma = std::sqrt(w.sigma2);
  const double sqrt_t = std::sqrt(t);
  const double a = w.eta * sqrt_t / sigma;
  const double b = x / (sigma * sqrt_t);
  const double first = std_normal_cdf(a - b);
  const double second = std::exp(2.0 * w.eta * x / w.sigma2 +
                                 std_normal_logcdf(-a - b));
  const double f = first + second;
  return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
}

// f_x(t | eta, sigma) = sqrt(lambda/(2 pi t^3)) * exp(-lambda (t-mu)^2 / (2 mu^2 t)).
inline double ig_pdf(double t, double x, const WienerParams& w) {
  if (!(t > 0.0)) throw domain_error("ig_pdf: require t > 0");
  const IgParams p = ig_params_from_threshold(x, w);
  const double dev = t - p.mu;
  const double log_pdf = 0.5 * std::log(p.lambda) - kLogSqrt2Pi -
                         1.5 * std::log(t) -
                         p.lambda * dev * dev / (2.0 * p.mu * p.mu * t);
  return std::exp(log_pdf);
}

// Driftless case: P(T_x <= t) = 2 P(Z(t) >= x) = 2 (1 - Phi(x/(sigma*sqrt(t)))).
inline double reflection_hitting_cdf(double t, double x, double sigma2) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw domain_error("reflection_hitting_cdf: require x > 0");
  if (!(sigma2 > 0.0))
    throw domain_error("reflection_hitting_cdf: require sigma2 > 0");
  if (!(t >= 0.0)) throw domain_error("reflection_hitting_cdf: require t >= 0");
  if (t == 0.0) return 0.0;
  const double z = x / (std::sqrt(sigma2) * std::sqrt(t));
  return 2.0 * (0.5 * std::erfc(z * kInvSqrt2));
}

// Upper limit for the threshold average: exp(-40) ~ 4e-18 bounds the
// truncated tail mass.
inline constexpr double kMixtureThresholdCutoff = 40.0;

// Lifetime CDF under an exponential(1) hazard potential:
//   F(t | eta, sigma) = integral_0^inf F_x(t | eta, sigma) e^{-x} dx.
// This is the defining integral of the location mixture; the printed
// expanded form groups the exponential factor differently and is not used.
inline double mixture_lifetime_cdf(double t, const WienerParams& w,
                                   const Quadrature& q = {}) {
  if (!(t >= 0.0)) throw domain_error("mixture_lifetime_cdf: require t >= 0");
  if (!(w.eta > 0.0))
    throw domain_error("mixture_lifetime_cdf: require eta > 0");
  if (t == 0.0) return 0.0;
  const double f = integrate(
      [&](double x) { return ig_cdf(t, x, w) * std::exp(-x); }, 0.0,
      kMixtureThresholdCutoff, q);
  return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
}

}  // namespace hazpot
