#pragma once

// Stochastic-process simulation and Monte Carlo estimators: Wiener paths and
// running maxima, standard gamma processes, correlated Brownian pairs,
// hitting times to fixed and exponential(1) thresholds, the trauma model and
// the dependent competing-risk survival.
//
// Determinism contract: path i draws from Substream(cfg.seed, i) only, and
// estimator reductions run in path order, so results are bitwise identical
// for any worker count.  Estimators use Euler increments on the fixed dt
// grid with no bridge correction; the discrete maximum undercounts
// crossings, biasing hitting estimates low by O(sqrt(dt)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "hazpot/distcore.hpp"
#include "hazpot/errors.hpp"
#include "hazpot/rng.hpp"

namespace hazpot {

struct PathConfig {
  double dt;
  std::size_t n_steps;
  std::size_t n_paths;
  std::uint64_t seed;

  PathConfig(double dt_, std::size_t n_steps_, std::size_t n_paths_,
             std::uint64_t seed_)
      : dt(dt_), n_steps(n_steps_), n_paths(n_paths_), seed(seed_) {
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw domain_error("PathConfig: require dt > 0");
    if (n_steps < 1) throw domain_error("PathConfig: require n_steps >= 1");
    if (n_paths < 1) throw domain_error("PathConfig: require n_paths >= 1");
  }

  double horizon() const { return dt * static_cast<double>(n_steps); }
};

struct SamplePath {
  std::vector<double> times;
  std::vector<double> values;
};

struct CorrelationRho {
  double value;

  explicit CorrelationRho(double rho) : value(rho) {
    if (!(rho >= -1.0 && rho <= 1.0))
      throw domain_error("CorrelationRho: require -1 <= rho <= 1");
  }
};

struct McEstimate {
  double value;
  double std_err;
  std::size_t n_paths;
};

namespace detail {

// Number of grid steps covered by time t (grid point j*dt with j*dt <= t,
// up to rounding slack), validated against the configured horizon.
inline std::size_t steps_for_time(double t, const PathConfig& cfg) {
  if (!(t > 0.0)) throw domain_error("estimator: require t > 0");
  if (t > cfg.horizon() * (1.0 + 1e-12))
    throw domain_error("estimator: horizon dt*n_steps is shorter than t");
  const std::size_t j =
      static_cast<std::size_t>(std::floor(t / cfg.dt + 1e-9));
  return std::min(j, cfg.n_steps);
}

inline std::vector<std::size_t> steps_for_grid(std::span<const double> ts,
                                               const PathConfig& cfg) {
  std::vector<std::size_t> steps;
  steps.reserve(ts.size());
  double prev = 0.0;
  for (double t : ts) {
    if (!(t > prev))
      throw domain_error("estimator: time grid must be ascending and > 0");
    steps.push_back(steps_for_time(t, cfg));
    prev = t;
  }
  return steps;
}

// Runs f(i) for every path index, split into contiguous blocks across
// workers.  f must only write to per-index slots.
template <class F>
void for_each_path(std::size_t n, unsigned workers, F&& f) {
  if (workers == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    workers = hw > 0 ? hw : 1;
  }
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const std::size_t n_blocks = std::min<std::size_t>(workers, n);
  const std::size_t block = (n + n_blocks - 1) / n_blocks;
  std::vector<std::thread> pool;
  pool.reserve(n_blocks);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline McEstimate bernoulli_estimate(std::uint64_t hits, std::size_t n) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

}  // namespace detail

// Discretized Wiener path: values[j+1] - values[j] ~ N(eta*dt, sigma2*dt),
// a deterministic function of (cfg.seed, path_index).
inline SamplePath sample_wiener_path(const WienerParams& w,
                                     const PathConfig& cfg,
                                     std::size_t path_index) {
  if (path_index >= cfg.n_paths)
    throw domain_error("sample_wiener_path: path_index out of range");
  Substream rng(cfg.seed, path_index);
  SamplePath p;
  p.times.resize(cfg.n_steps + 1);
  p.values.resize(cfg.n_steps + 1);
  const double mean = w.eta * cfg.dt;
  const double sd = std::sqrt(w.sigma2 * cfg.dt);
  p.times[0] = 0.0;
  p.values[0] = 0.0;
  for (std::size_t j = 1; j <= cfg.n_steps; ++j) {
    p.times[j] = static_cast<double>(j) * cfg.dt;
    p.values[j] = p.values[j - 1] + mean + sd * rng.next_gaussian();
  }
  return p;
}

// Wiener maximum process on the grid, clamped at zero so that the result is
// a valid cumulative hazard (H(0) = 0, H >= 0, nondecreasing).
inline SamplePath running_max(const SamplePath& p) {
  if (p.times.size() != p.values.size() || p.times.empty())
    throw domain_error("running_max: malformed path");
  SamplePath out;
  out.times = p.times;
  out.values.resize(p.values.size());
  double m = 0.0;
  for (std::size_t j = 0; j < p.values.size(); ++j) {
    if (p.values[j] > m) m = p.values[j];
    out.values[j] = m;
  }
  return out;
}

// Standard gamma process: independent Gamma(shape = dt, scale = 1)
// increments, so E H(t) = Var H(t) = t.
inline SamplePath sample_gamma_path(const PathConfig& cfg,
                                    std::size_t path_index) {
  if (path_index >= cfg.n_paths)
    throw domain_error("sample_gamma_path: path_index out of range");
  Substream rng(cfg.seed, path_index);
  SamplePath p;
  p.times.resize(cfg.n_steps + 1);
  p.values.resize(cfg.n_steps + 1);
  p.times[0] = 0.0;
  p.values[0] = 0.0;
  for (std::size_t j = 1; j <= cfg.n_steps; ++j) {
    p.times[j] = static_cast<double>(j) * cfg.dt;
    p.values[j] = p.values[j - 1] + rng.next_gamma(cfg.dt);
  }
  return p;
}

// Two standard Brownian paths whose per-step increment pairs are bivariate
// Gaussian with correlation rho.
inline std::pair<SamplePath, SamplePath> sample_correlated_bm_pair(
    CorrelationRho rho, const PathConfig& cfg, std::size_t path_index) {
  if (path_index >= cfg.n_paths)
    throw domain_error("sample_correlated_bm_pair: path_index out of range");
  Substream rng(cfg.seed, path_index);
  SamplePath a, b;
  a.times.resize(cfg.n_steps + 1);
  a.values.resize(cfg.n_steps + 1);
  a.times[0] = 0.0;
  a.values[0] = 0.0;
  const double sd = std::sqrt(cfg.dt);
  const double r = rho.value;
  const double s = std::sqrt(1.0 - r * r);
  b = a;
  for (std::size_t j = 1; j <= cfg.n_steps; ++j) {
    const double z1 = rng.next_gaussian();
    const double z2 = rng.next_gaussian();
    a.times[j] = static_cast<double>(j) * cfg.dt;
    b.times[j] = a.times[j];
    a.values[j] = a.values[j - 1] + sd * z1;
    b.values[j] = b.values[j - 1] + sd * (r * z1 + s * z2);
  }
  return {std::move(a), std::move(b)};
}

// --- estimators ----------------------------------------------------------
//
// Each estimator has a curve form (one pass per path, values recorded at
// every grid time) and a single-time convenience wrapper.  Estimates at a
// shorter time reuse exactly the draws a dedicated shorter run would make,
// so curves are consistent with pointwise calls.

// Fraction of paths whose discretized running maximum reaches the fixed
// level x by each time; estimates ig_cdf(t, x, w) (biased low by the
// discrete-maximum effect).
inline std::vector<McEstimate> mc_fixed_threshold_hitting_curve(
    const WienerParams& w, double x, std::span<const double> ts,
    const PathConfig& cfg, unsigned workers = 0) {
  if (!(x > 0.0)) throw domain_error("mc_fixed_threshold_hitting: x > 0");
  if (!(w.eta > 0.0))
    throw domain_error("mc_fixed_threshold_hitting: require eta > 0");
  const auto steps = detail::steps_for_grid(ts, cfg);
  const std::size_t max_steps = steps.empty() ? 0 : steps.back();

  std::vector<std::size_t> first_hit(cfg.n_paths, detail::kNever);
  const double mean = w.eta * cfg.dt;
  const double sd = std::sqrt(w.sigma2 * cfg.dt);
  detail::for_each_path(cfg.n_paths, workers, [&](std::size_t i) {
    Substream rng(cfg.seed, i);
    double z = 0.0;
    for (std::size_t j = 1; j <= max_steps; ++j) {
      z += mean + sd * rng.next_gaussian();
      if (z >= x) {
        first_hit[i] = j;
        break;
      }
    }
  });

  std::vector<McEstimate> out;
  out.reserve(steps.size());
  for (std::size_t g = 0; g < steps.size(); ++g) {
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < cfg.n_paths; ++i)
      if (first_hit[i] <= steps[g]) ++hits;
    out.push_back(detail::bernoulli_estimate(hits, cfg.n_paths));
  }
  return out;
}

inline McEstimate mc_fixed_threshold_hitting(const WienerParams& w, double x,
                                             double t, const PathConfig& cfg,
                                             unsigned workers = 0) {
  const double ts[1] = {t};
  return mc_fixed_threshold_hitting_curve(w, x, ts, cfg, workers)[0];
}

// Hitting of an exponential(1) threshold drawn per path (the hazard
// potential); estimates mixture_lifetime_cdf(t, w).  The threshold draw
// precedes the increment draws in the substream.
inline std::vector<McEstimate> mc_exponential_threshold_hitting_curve(
    const WienerParams& w, std::span<const double> ts, const PathConfig& cfg,
    unsigned workers = 0) {
  if (!(w.eta > 0.0))
    throw domain_error("mc_exponential_threshold_hitting: require eta > 0");
  const auto steps = detail::steps_for_grid(ts, cfg);
  const std::size_t max_steps = steps.empty() ? 0 : steps.back();

  std::vector<std::size_t> first_hit(cfg.n_paths, detail::kNever);
  const double mean = w.eta * cfg.dt;
  const double sd = std::sqrt(w.sigma2 * cfg.dt);
  detail::for_each_path(cfg.n_paths, workers, [&](std::size_t i) {
    Substream rng(cfg.seed, i);
    const double threshold = rng.next_exponential();
    double z = 0.0;
    for (std::size_t j = 1; j <= max_steps; ++j) {
      z += mean + sd * rng.next_gaussian();
      if (z >= threshold) {
        first_hit[i] = j;
        break;
      }
    }
  });

  std::vector<McEstimate> out;
  out.reserve(steps.size());
  for (std::size_t g = 0; g < steps.size(); ++g) {
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < cfg.n_paths; ++i)
      if (first_hit[i] <= steps[g]) ++hits;
    out.push_back(detail::bernoulli_estimate(hits, cfg.n_paths));
  }
  return out;
}

inline McEstimate mc_exponential_threshold_hitting(const WienerParams& w,
                                                   double t,
                                                   const PathConfig& cfg,
                                                   unsigned workers = 0) {
  const double ts[1] = {t};
  return mc_exponential_threshold_hitting_curve(w, ts, cfg, workers)[0];
}

// Bivariate dependent competing-risk survival of two Brownian maximum
// processes sharing one exponential(1) hazard potential:
// P(T >= t) = P(H_1(t) <= X, H_2(t) <= X).
inline std::vector<McEstimate> mc_dependent_competing_survival_curve(
    CorrelationRho rho, std::span<const double> ts, const PathConfig& cfg,
    unsigned workers = 0) {
  const auto steps = detail::steps_for_grid(ts, cfg);
  const std::size_t max_steps = steps.empty() ? 0 : steps.back();

  std::vector<std::size_t> first_failure(cfg.n_paths, detail::kNever);
  const double sd = std::sqrt(cfg.dt);
  const double r = rho.value;
  const double s = std::sqrt(1.0 - r * r);
  detail::for_each_path(cfg.n_paths, workers, [&](std::size_t i) {
    Substream rng(cfg.seed, i);
    const double threshold = rng.next_exponential();
    double w1 = 0.0, w2 = 0.0;
    for (std::size_t j = 1; j <= max_steps; ++j) {
      const double z1 = rng.next_gaussian();
      const double z2 = rng.next_gaussian();
      w1 += sd * z1;
      w2 += sd * (r * z1 + s * z2);
      if (w1 > threshold || w2 > threshold) {
        first_failure[i] = j;
        break;
      }
    }
  });

  std::vector<McEstimate> out;
  out.reserve(steps.size());
  for (std::size_t g = 0; g < steps.size(); ++g) {
    std::uint64_t alive = 0;
    for (std::size_t i = 0; i < cfg.n_paths; ++i)
      if (first_failure[i] > steps[g]) ++alive;
    out.push_back(detail::bernoulli_estimate(alive, cfg.n_paths));
  }
  return out;
}

inline McEstimate mc_dependent_competing_survival(CorrelationRho rho, double t,
                                                  const PathConfig& cfg,
                                                  unsigned workers = 0) {
  const double ts[1] = {t};
  return mc_dependent_competing_survival_curve(rho, ts, cfg, workers)[0];
}

// Trauma survival: per gamma-process path, exp(-integral_0^t H(s) ds)
// (trapezoidal rule on the grid) times the indicator {H(t) <= threshold};
// the mean over paths estimates P(T >= t).  threshold may be +infinity.
inline std::vector<McEstimate> mc_trauma_survival_curve(
    std::span<const double> ts, double threshold, const PathConfig& cfg,
    unsigned workers = 0) {
  if (std::isnan(threshold) || !(threshold > 0.0))
    throw domain_error("mc_trauma_survival: require threshold > 0");
  const auto steps = detail::steps_for_grid(ts, cfg);
  const std::size_t max_steps = steps.empty() ? 0 : steps.back();
  const std::size_t n_times = steps.size();

  std::vector<double> values(cfg.n_paths * n_times, 0.0);
  detail::for_each_path(cfg.n_paths, workers, [&](std::size_t i) {
    Substream rng(cfg.seed, i);
    double h = 0.0;        // H(j*dt)
    double integral = 0.0; // trapezoid of H over [0, j*dt]
    std::size_t g = 0;
    while (g < n_times && steps[g] == 0) values[i * n_times + g++] = 1.0;
    for (std::size_t j = 1; j <= max_steps && g < n_times; ++j) {
      const double h_next = h + rng.next_gamma(cfg.dt);
      integral += 0.5 * cfg.dt * (h + h_next);
      h = h_next;
      while (g < n_times && steps[g] == j) {
        values[i * n_times + g] =
            (h <= threshold) ? std::exp(-integral) : 0.0;
        ++g;
      }
      if (h > threshold) break;  // indicator is dead for every later time
    }
  });

  std::vector<McEstimate> out;
  out.reserve(n_times);
  for (std::size_t g = 0; g < n_times; ++g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < cfg.n_paths; ++i)
      sum += values[i * n_times + g];
    const double n = static_cast<double>(cfg.n_paths);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
      const double d = values[i * n_times + g] - mean;
      ss += d * d;
    }
    const double se = cfg.n_paths > 1 ? std::sqrt(ss / (n * (n - 1.0))) : 0.0;
    out.push_back({mean, se, cfg.n_paths});
  }
  return out;
}

inline McEstimate mc_trauma_survival(double t, double threshold,
                                     const PathConfig& cfg,
                                     unsigned workers = 0) {
  const double ts[1] = {t};
  return mc_trauma_survival_curve(ts, threshold, cfg, workers)[0];
}

}  // namespace hazpot
