#pragma once

// Bayesian inference for the Wiener marker model: Gaussian increment
// likelihood, the translated-beta prior on the drift angle, the conditional
// inverse-gamma prior on the diffusion, the discretized joint posterior on
// (eta, sigma2), the analytic shifted-exponential threshold posterior, and
// predictive / residual-life survival.
//
// The joint posterior factorizes as pi(eta, sigma2, x; Z) =
// pi1(eta, sigma2; Z) * pi2(X; Z); the two factors are computed by
// independent code paths and only multiplied inside predictive_survival.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "hazpot/distcore.hpp"
#include "hazpot/errors.hpp"
#include "hazpot/quadrature.hpp"

namespace hazpot {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Discretely observed marker values Z(t_1..t_k), 0 < t_1 < ... < t_k.
// Z(0) = 0 is implicit and never stored.
class MarkerSeries {
 public:
  MarkerSeries(std::vector<double> times, std::vector<double> values)
      : times_(std::move(times)), values_(std::move(values)) {
    if (times_.empty() || times_.size() != values_.size())
      throw domain_error("MarkerSeries: need matching nonempty times/values");
    double prev = 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) {
      if (!std::isfinite(times_[i]) || !std::isfinite(values_[i]))
        throw domain_error("MarkerSeries: non-finite entry");
      if (!(times_[i] > prev))
        throw domain_error(
            "MarkerSeries: times must be strictly increasing and > 0");
      prev = times_[i];
    }
  }

  std::size_t k() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  double t_last() const { return times_.back(); }
  double z_last() const { return values_.back(); }
  double z_max() const { return *std::max_element(values_.begin(), values_.end()); }

  // Increment view: s_i = t_i - t_{i-1}, y_i = Z(t_i) - Z(t_{i-1}) with
  // t_0 = 0, Z(t_0) = 0.
  std::pair<std::vector<double>, std::vector<double>> increments() const {
    std::vector<double> s(k()), y(k());
    double pt = 0.0, pz = 0.0;
    for (std::size_t i = 0; i < k(); ++i) {
      s[i] = times_[i] - pt;
      y[i] = values_[i] - pz;
      pt = times_[i];
      pz = values_[i];
    }
    return {std::move(s), std::move(y)};
  }

 private:
  std::vector<double> times_, values_;
};

// Hyperparameters: theta = arctan(eta) has a translated Beta(beta_p, beta_q)
// density on (a, b); the diffusion prior is pinned by the integer Delta
// (eta = Delta * sigma at t = 1).
struct PriorConfig {
  double a = kPi / 8.0;
  double b = 3.0 * kPi / 8.0;
  double beta_p = 2.0;
  double beta_q = 2.0;
  int delta = 3;

  void validate() const {
    if (!(0.0 < a && a < b && b < kPi / 2.0))
      throw domain_error("PriorConfig: require 0 < a < b < pi/2");
    if (!(beta_p > 0.0) || !(beta_q > 0.0))
      throw domain_error("PriorConfig: require beta_p, beta_q > 0");
    if (delta < 1) throw domain_error("PriorConfig: require delta >= 1");
  }
};

// Sum of log N(y_i; eta*s_i, sigma2*s_i) over the increments.  (The model
// statement y_i ~ N(eta*s_i, sigma2*s_i) defines the likelihood; the
// printed formula with (sigma2*s_i) inside the square is a typo.)
inline double log_likelihood(const WienerParams& w, const MarkerSeries& m) {
  const auto [s, y] = m.increments();
  double ll = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double var = w.sigma2 * s[i];
    const double dev = y[i] - w.eta * s[i];
    ll += -0.5 * std::log(2.0 * kPi * var) - dev * dev / (2.0 * var);
  }
  return ll;
}

// Log density of eta under theta = arctan(eta) ~ a + (b-a)*Beta(p, q);
// -inf outside (tan a, tan b).  Includes the 1/(1+eta^2) change of
// variables.  With p = q = 1, a -> 0, b -> pi/2 this tends to the folded
// Cauchy 2/(pi(1+eta^2)).
inline double eta_prior_logpdf(double eta, const PriorConfig& p) {
  p.validate();
  if (!(eta > 0.0)) throw domain_error("eta_prior_logpdf: require eta > 0");
  const double theta = std::atan(eta);
  if (theta <= p.a || theta >= p.b)
    return -std::numeric_limits<double>::infinity();
  const double u = (theta - p.a) / (p.b - p.a);
  const double log_beta_norm = std::lgamma(p.beta_p) + std::lgamma(p.beta_q) -
                               std::lgamma(p.beta_p + p.beta_q);
  return (p.beta_p - 1.0) * std::log(u) + (p.beta_q - 1.0) * std::log1p(-u) -
         log_beta_norm - std::log(p.b - p.a) - std::log1p(eta * eta);
}

// Log density of psi = sigma2 given eta: inverse gamma with shape
// alpha = Delta^2/(2 eta) + 1 and scale beta = eta/2, i.e. the normalized
// version of psi^{-(Delta^2/(2 eta) + 2)} exp(-eta/(2 psi)).  Prior mean is
// eta^2/Delta^2.
inline double sigma2_prior_logpdf(double sigma2, double eta,
                                  const PriorConfig& p) {
  p.validate();
  if (!(sigma2 > 0.0))
    throw domain_error("sigma2_prior_logpdf: require sigma2 > 0");
  if (!(eta > 0.0)) throw domain_error("sigma2_prior_logpdf: require eta > 0");
  const double d = static_cast<double>(p.delta);
  const double alpha = d * d / (2.0 * eta) + 1.0;
  const double beta = 0.5 * eta;
  return alpha * std::log(beta) - std::lgamma(alpha) -
         (alpha + 1.0) * std::log(sigma2) - beta / sigma2;
}

// Closed-form maximizer of log_likelihood; the test oracle for the grid.
// eta_hat = Z(t_k)/t_k, sigma2_hat = (1/k) sum (y_i - eta_hat s_i)^2 / s_i.
// sigma2 can legitimately be zero (exact-fit data), so this is not a
// WienerParams.
struct MleEstimate {
  double eta;
  double sigma2;
};

inline MleEstimate mle(const MarkerSeries& m) {
  if (m.k() < 2)
    throw domain_error("mle: need k >= 2 (sigma2 unidentifiable)");
  const double eta_hat = m.z_last() / m.t_last();
  const auto [s, y] = m.increments();
  double ss = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dev = y[i] - eta_hat * s[i];
    ss += dev * dev / s[i];
  }
  return {eta_hat, ss / static_cast<double>(m.k())};
}

// Discretized joint posterior over (eta, sigma2).  Nodes are cell centers:
// uniform in theta over (a, b) for eta, log-uniform for sigma2.
// log_weights hold the posterior log density at the nodes; after
// normalization sum(exp(log_weight) * cell_area) = 1.
class PosteriorGrid {
 public:
  std::vector<double> eta_nodes, eta_edges;
  std::vector<double> sigma2_nodes, sigma2_edges;
  std::vector<double> log_weights;  // row-major, [i_eta * n_sigma2 + j]
  bool normalized = false;

  std::size_t n_eta() const { return eta_nodes.size(); }
  std::size_t n_sigma2() const { return sigma2_nodes.size(); }

  double cell_area(std::size_t i, std::size_t j) const {
    return (eta_edges[i + 1] - eta_edges[i]) *
           (sigma2_edges[j + 1] - sigma2_edges[j]);
  }
  double mass(std::size_t i, std::size_t j) const {
    return std::exp(log_weights[i * n_sigma2() + j]) * cell_area(i, j);
  }
  double total_mass() const {
    double total = 0.0;
    for (std::size_t i = 0; i < n_eta(); ++i)
      for (std::size_t j = 0; j < n_sigma2(); ++j) total += mass(i, j);
    return total;
  }

  double eta_mean() const { return moment([](double e, double) { return e; }); }
  double sigma2_mean() const {
    return moment([](double, double s2) { return s2; });
  }

  std::pair<std::size_t, std::size_t> argmax() const {
    std::size_t best = 0;
    for (std::size_t c = 1; c < log_weights.size(); ++c)
      if (log_weights[c] > log_weights[best]) best = c;
    return {best / n_sigma2(), best % n_sigma2()};
  }
  double eta_mode() const { return eta_nodes[argmax().first]; }
  double sigma2_mode() const { return sigma2_nodes[argmax().second]; }

  // Normalizes in place via log-sum-exp over cell masses.
  void normalize() {
    double m = -std::numeric_limits<double>::infinity();
    std::vector<double> log_mass(log_weights.size());
    for (std::size_t i = 0; i < n_eta(); ++i)
      for (std::size_t j = 0; j < n_sigma2(); ++j) {
        const std::size_t c = i * n_sigma2() + j;
        log_mass[c] = log_weights[c] + std::log(cell_area(i, j));
        m = std::max(m, log_mass[c]);
      }
    if (!std::isfinite(m))
      throw numeric_error(
          "posterior_grid: joint density underflowed on every cell; widen or "
          "shift the grid bounds",
          0.0, 0.0);
    double sum = 0.0;
    for (double lm : log_mass) sum += std::exp(lm - m);
    const double log_total = m + std::log(sum);
    for (double& lw : log_weights) lw -= log_total;
    normalized = true;
  }

 private:
  template <class F>
  double moment(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < n_eta(); ++i)
      for (std::size_t j = 0; j < n_sigma2(); ++j)
        acc += f(eta_nodes[i], sigma2_nodes[j]) * mass(i, j);
    return acc;
  }
};

struct GridOptions {
  // Override the default sigma2 bounds [mle/100, mle*100].
  std::optional<std::pair<double, double>> sigma2_bounds;
  // Test hooks: replace a prior factor with a constant.
  bool flat_eta_prior = false;
  bool flat_sigma2_prior = false;
};

inline PosteriorGrid posterior_grid(const MarkerSeries& m,
                                    const PriorConfig& p, std::size_t n_eta,
                                    std::size_t n_sigma2,
                                    const GridOptions& opts = {}) {
  p.validate();
  if (n_eta < 2 || n_sigma2 < 2)
    throw domain_error("posterior_grid: need n_eta, n_sigma2 >= 2");

  double s2_lo, s2_hi;
  if (opts.sigma2_bounds) {
    s2_lo = opts.sigma2_bounds->first;
    s2_hi = opts.sigma2_bounds->second;
    if (!(s2_lo > 0.0) || !(s2_hi > s2_lo))
      throw domain_error("posterior_grid: bad sigma2 bounds");
  } else {
    const MleEstimate hat = mle(m);
    if (!(hat.sigma2 > 0.0))
      throw domain_error(
          "posterior_grid: sigma2 MLE is zero (exact-fit data); supply "
          "explicit sigma2 bounds");
    s2_lo = hat.sigma2 / 100.0;
    s2_hi = hat.sigma2 * 100.0;
  }

  PosteriorGrid g;
  g.eta_edges.resize(n_eta + 1);
  g.eta_nodes.resize(n_eta);
  for (std::size_t i = 0; i <= n_eta; ++i) {
    const double theta =
        p.a + (p.b - p.a) * static_cast<double>(i) / static_cast<double>(n_eta);
    g.eta_edges[i] = std::tan(theta);
  }
  for (std::size_t i = 0; i < n_eta; ++i) {
    const double theta_mid = p.a + (p.b - p.a) *
                                       (static_cast<double>(i) + 0.5) /
                                       static_cast<double>(n_eta);
    g.eta_nodes[i] = std::tan(theta_mid);
  }

  g.sigma2_edges.resize(n_sigma2 + 1);
  g.sigma2_nodes.resize(n_sigma2);
  const double log_lo = std::log(s2_lo), log_hi = std::log(s2_hi);
  for (std::size_t j = 0; j <= n_sigma2; ++j)
    g.sigma2_edges[j] = std::exp(
        log_lo + (log_hi - log_lo) * static_cast<double>(j) /
                     static_cast<double>(n_sigma2));
  for (std::size_t j = 0; j < n_sigma2; ++j)
    g.sigma2_nodes[j] = std::exp(
        log_lo + (log_hi - log_lo) * (static_cast<double>(j) + 0.5) /
                     static_cast<double>(n_sigma2));

  g.log_weights.resize(n_eta * n_sigma2);
  for (std::size_t i = 0; i < n_eta; ++i) {
    const double eta = g.eta_nodes[i];
    const double lp_eta = opts.flat_eta_prior ? 0.0 : eta_prior_logpdf(eta, p);
    for (std::size_t j = 0; j < n_sigma2; ++j) {
      const double s2 = g.sigma2_nodes[j];
      const double lp_s2 =
          opts.flat_sigma2_prior ? 0.0 : sigma2_prior_logpdf(s2, eta, p);
      g.log_weights[i * n_sigma2 + j] =
          log_likelihood(WienerParams(eta, s2), m) + lp_eta + lp_s2;
    }
  }
  g.normalize();
  return g;
}

// pi2(X; Z): exponential(1) prior conditioned on {X > Z(t_k)}, i.e. a unit
// exponential shifted to (shift, inf).  Z(t_k) <= 0 carries no information
// (the prior already lives on (0, inf)), so the shift clamps at zero.  The
// running maximum max_i Z(t_i) is a logically tighter bound; it is exposed
// behind a flag but the default follows the Z(t_k) form.
class ThresholdPosterior {
 public:
  explicit ThresholdPosterior(double shift) : shift_(std::max(0.0, shift)) {}

  double shift() const { return shift_; }

  // P(X > x; Z)
  double survival(double x) const {
    return x <= shift_ ? 1.0 : std::exp(-(x - shift_));
  }

  double pdf(double x) const {
    return x > shift_ ? std::exp(-(x - shift_)) : 0.0;
  }

 private:
  double shift_;
};

inline ThresholdPosterior threshold_posterior(const MarkerSeries& m,
                                              bool from_series_max = false) {
  return ThresholdPosterior(from_series_max ? m.z_max() : m.z_last());
}

// Pr(T > t; Z): the grid-cell mixture of the per-cell threshold averages
//   sum_cells mass(eta, sigma2) * int_shift^inf (1 - F_x(t)) e^{-(x-shift)} dx.
// Uses the survival form 1 - F_x; the tail beyond shift + 40 contributes
// less than e^{-40} and is dropped.
inline double predictive_survival(double t, const PosteriorGrid& g,
                                  const ThresholdPosterior& xp,
                                  const Quadrature& q = {}) {
  if (!(t > 0.0)) throw domain_error("predictive_survival: require t > 0");
  if (!g.normalized)
    throw domain_error("predictive_survival: grid must be normalized");
  double total = 0.0;
  for (std::size_t i = 0; i < g.n_eta(); ++i) {
    for (std::size_t j = 0; j < g.n_sigma2(); ++j) {
      const double m = g.mass(i, j);
      if (m <= 0.0) continue;
      const WienerParams w(g.eta_nodes[i], g.sigma2_nodes[j]);
      const double inner = integrate(
          [&](double v) {
            return (1.0 - ig_cdf(t, xp.shift() + v, w)) * std::exp(-v);
          },
          0.0, kMixtureThresholdCutoff, q);
      total += m * inner;
    }
  }
  return std::clamp(total, 0.0, 1.0);
}

// Residual-life survival Pr(T > t_k + u | T > t_k) as the ratio of
// predictive survivals.  Exactly 1 at u = 0.
inline double residual_life_survival(double u, const MarkerSeries& m,
                                     const PosteriorGrid& g,
                                     const ThresholdPosterior& xp,
                                     const Quadrature& q = {}) {
  if (!(u >= 0.0)) throw domain_error("residual_life_survival: require u >= 0");
  if (u == 0.0) return 1.0;
  const double denom = predictive_survival(m.t_last(), g, xp, q);
  if (!(denom > 0.0))
    throw numeric_error(
        "residual_life_survival: predictive survival at t_k is numerically "
        "zero",
        denom, 0.0);
  const double num = predictive_survival(m.t_last() + u, g, xp, q);
  return std::clamp(num / denom, 0.0, 1.0);
}

}  // namespace hazpot
