#pragma once

// Closed-form competing-risk survival functions: additive risks under
// independent hazard potentials, the Gumbel bivariate-exponential dependent
// case, the single-item max rule, the sandwich bounds, and the gamma-process
// trauma survival.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "hazpot/errors.hpp"

namespace hazpot {

// A cumulative hazard H(t): nonnegative, nondecreasing, H(0) = 0.  Either a
// power law c*t^p or a sampled table with linear interpolation.  Beyond the
// final knot the table is held flat at its last value; the linear trend is
// never extrapolated.
class HazardCurve {
 public:
  static HazardCurve power_law(double c, double p) {
    if (!(c > 0.0) || !(p > 0.0) || !std::isfinite(c) || !std::isfinite(p))
      throw domain_error("HazardCurve: power law requires c > 0 and p > 0");
    HazardCurve h;
    h.c_ = c;
    h.p_ = p;
    return h;
  }

  // Knots must start at (0, 0), have strictly increasing times and
  // nondecreasing values.
  static HazardCurve table(std::vector<double> times,
                           std::vector<double> values) {
    if (times.size() != values.size() || times.size() < 2)
      throw domain_error("HazardCurve: table needs >= 2 matching knots");
    if (times.front() != 0.0 || values.front() != 0.0)
      throw domain_error("HazardCurve: table must start at (0, 0)");
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (!(times[i] > times[i - 1]))
        throw domain_error("HazardCurve: table times must strictly increase");
      if (values[i] < values[i - 1])
        throw domain_error("HazardCurve: table values must be nondecreasing");
    }
    HazardCurve h;
    h.times_ = std::move(times);
    h.values_ = std::move(values);
    return h;
  }

  double operator()(double t) const {
    if (!(t >= 0.0)) throw domain_error("HazardCurve: require t >= 0");
    if (times_.empty()) return c_ * std::pow(t, p_);
    if (t >= times_.back()) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin());
    const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
    return values_[i - 1] + w * (values_[i] - values_[i - 1]);
  }

 private:
  HazardCurve() = default;
  double c_ = 0.0, p_ = 0.0;
  std::vector<double> times_, values_;
};

// Dependence parameter of the Gumbel bivariate exponential
// S(x1, x2) = exp(-x1 - x2 - theta*x1*x2), 0 <= theta <= 1.
struct GumbelTheta {
  double value;

  explicit GumbelTheta(double theta) : value(theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
      throw domain_error("GumbelTheta: require 0 <= theta <= 1");
  }
};

// P(T >= t) = exp(-(H_1(t) + ... + H_k(t))) for independent unit-exponential
// hazard potentials.
inline double additive_survival(std::span<const HazardCurve> hs, double t) {
  if (hs.empty()) throw domain_error("additive_survival: no hazard curves");
  double total = 0.0;
  for (const auto& h : hs) total += h(t);
  return std::exp(-total);
}

// P(T >= t | theta) = exp(-(H_1(t) + H_2(t) + theta*H_1(t)*H_2(t))) under the
// Gumbel bivariate exponential law for the two hazard potentials.
inline double gumbel_survival(const HazardCurve& h1, const HazardCurve& h2,
                              GumbelTheta theta, double t) {
  const double a = h1(t);
  const double b = h2(t);
  return std::exp(-(a + b + theta.value * a * b));
}

// Single item, k simultaneous agents, one shared potential:
// P(T >= t) = exp(-max_i H_i(t)).
inline double max_rule_survival(std::span<const HazardCurve> hs, double t) {
  if (hs.empty()) throw domain_error("max_rule_survival: no hazard curves");
  double m = 0.0;
  for (const auto& h : hs) m = std::max(m, h(t));
  return std::exp(-m);
}

// Sandwich bounds: totally positively dependent potentials give the upper
// (max rule) bound, independent potentials the lower (additive) bound.
inline std::pair<double, double> survival_bounds(
    std::span<const HazardCurve> hs, double t) {
  if (hs.empty()) throw domain_error("survival_bounds: no hazard curves");
  return {additive_survival(hs, t), max_rule_survival(hs, t)};
}

// Trauma survival for a standard gamma degradation process with an infinite
// threshold: P(T >= t) = exp(-(1+t) log(1+t) + t).
inline double trauma_gamma_closed(double t) {
  if (!(t >= 0.0)) throw domain_error("trauma_gamma_closed: require t >= 0");
  return std::exp(-(1.0 + t) * std::log1p(t) + t);
}

}  // namespace hazpot
