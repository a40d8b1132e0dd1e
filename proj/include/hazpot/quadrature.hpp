#pragma once

// Adaptive 1-D quadrature on finite, half-infinite and doubly infinite
// intervals.  Gauss-Kronrod 7/15 on each subinterval, bisecting the
// subinterval with the largest error estimate until the global estimate
// meets max(abs_tol, rel_tol*|result|) or the subdivision budget runs out.
// Infinite endpoints are mapped to (0,1) with the rational substitution
// x = a + u/(1-u); the Kronrod nodes are interior so the endpoint
// singularity of the map is never evaluated.

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "hazpot/errors.hpp"

namespace hazpot {

struct Quadrature {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int max_subdivisions = 1 << 14;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw domain_error("Quadrature: tolerances must be positive");
    if (max_subdivisions < 1)
      throw domain_error("Quadrature: max_subdivisions must be >= 1");
  }
};

namespace detail {

// Nodes (positive half) and weights of the 15-point Kronrod extension of
// the 7-point Gauss rule on [-1,1].  Even-indexed nodes carry Gauss weights.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Interval {
  double a, b;
  double estimate;
  double error;
  bool operator<(const Interval& other) const { return error < other.error; }
};

template <class F>
Interval gk15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double gauss = 0.0, kronrod = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double f1 = f(mid - dx);
    const double f2 = (i < 7) ? f(mid + dx) : f1;  // center node counted once
    const double sum = (i < 7) ? f1 + f2 : f1;
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  gauss *= half;
  kronrod *= half;
  const double diff = std::fabs(kronrod - gauss);
  // QUADPACK-style sharpened error estimate: (200|K-G|)^1.5 capped by |K-G|.
  double err = diff;
  if (diff > 0.0) err = std::min(diff, std::pow(200.0 * diff, 1.5));
  return {a, b, kronrod, err};
}

}  // namespace detail

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

// Core adaptive loop on finite [a,b].  Does not throw on non-convergence;
// see integrate() for the throwing wrapper.
template <class F>
QuadResult integrate_finite(F&& f, double a, double b, const Quadrature& q = {}) {
  q.validate();
  if (!(a < b)) throw domain_error("integrate: requires a < b");

  std::priority_queue<detail::Interval> work;
  work.push(detail::gk15(f, a, b));
  double total = work.top().estimate;
  double total_err = work.top().error;
  int splits = 0;

  while (total_err > std::max(q.abs_tol, q.rel_tol * std::fabs(total)) &&
         splits < q.max_subdivisions) {
    const detail::Interval worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval no longer splittable in double precision
      work.push(worst);
      break;
    }
    const detail::Interval left = detail::gk15(f, worst.a, mid);
    const detail::Interval right = detail::gk15(f, mid, worst.b);
    total += left.estimate + right.estimate - worst.estimate;
    total_err += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++splits;
  }

  QuadResult r;
  r.value = total;
  r.error_estimate = total_err;
  r.subdivisions = splits;
  r.converged =
      total_err <= std::max(q.abs_tol, q.rel_tol * std::fabs(total));
  return r;
}

// Integrate f over (a,b); either endpoint may be infinite.  Throws
// numeric_error carrying the partial estimate if the tolerance cannot be
// met within the subdivision budget.
template <class F>
double integrate(F&& f, double a, double b, const Quadrature& q = {}) {
  const double inf = std::numeric_limits<double>::infinity();
  QuadResult r;
  if (a == -inf && b == inf) {
    // split at zero, map each half to (0,1)
    auto upper = [&f](double u) {
      const double om = 1.0 - u;
      return f(u / om) / (om * om);
    };
    auto lower = [&f](double u) {
      const double om = 1.0 - u;
      return f(-u / om) / (om * om);
    };
    const QuadResult r1 = integrate_finite(upper, 0.0, 1.0, q);
    const QuadResult r2 = integrate_finite(lower, 0.0, 1.0, q);
    r.value = r1.value + r2.value;
    r.error_estimate = r1.error_estimate + r2.error_estimate;
    r.subdivisions = r1.subdivisions + r2.subdivisions;
    r.converged = r1.converged && r2.converged;
  } else if (b == inf) {
    if (!std::isfinite(a)) throw domain_error("integrate: bad interval");
    auto g = [&f, a](double u) {
      const double om = 1.0 - u;
      return f(a + u / om) / (om * om);
    };
    r = integrate_finite(g, 0.0, 1.0, q);
  } else if (a == -inf) {
    if (!std::isfinite(b)) throw domain_error("integrate: bad interval");
    auto g = [&f, b](double u) {
      const double om = 1.0 - u;
      return f(b - u / om) / (om * om);
    };
    r = integrate_finite(g, 0.0, 1.0, q);
  } else {
    r = integrate_finite(f, a, b, q);
  }

  if (!r.converged)
    throw numeric_error("integrate: tolerance not reached within budget",
                        r.value, r.error_estimate);
  return r.value;
}

}  // namespace hazpot
