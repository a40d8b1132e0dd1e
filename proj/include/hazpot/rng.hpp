#pragma once

// Reproducible per-path random substreams.  Stream i is a pure function of
// (seed, i): the SplitMix64 update (Steele, Lea & Flood 2014; Vigna's
// fixed-increment variant) run from a state derived by avalanche-mixing the
// pair.  Distinct streams land at pseudo-random offsets of the length-2^64
// SplitMix64 orbit, so overlap between the short prefixes used here is
// negligible.  No global state; safe to construct concurrently.

#include <cmath>
#include <cstdint>

namespace hazpot {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class Substream {
 public:
  Substream(std::uint64_t seed, std::uint64_t stream)
      : state_(detail::mix64(seed + 0x9E3779B97F4A7C15ULL) ^
               detail::mix64(stream * 0xBF58476D1CE4E5B9ULL +
                             0x94D049BB133111EBULL)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1); never returns an endpoint, so
  // log(u) is always finite.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_exponential() { return -std::log(next_unit()); }

  // Marsaglia polar method; the spare coordinate is cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Marsaglia-Tsang squeeze for shape >= 1, boosted with u^(1/shape) below 1.
  // Scale is 1.
  double next_gamma(double shape) {
    if (shape < 1.0) {
      const double g = next_gamma(shape + 1.0);
      return g * std::pow(next_unit(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x, v;
      do {
        x = next_gaussian();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_unit();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hazpot
