#pragma once

#include <stdexcept>
#include <string>

namespace hazpot {

// Error taxonomy shared by the library and the CLI exit codes:
// domain_error -> misuse of a function contract (CLI exit 2 when user-driven),
// data_error   -> malformed input files (CLI exit 3),
// numeric_error-> a computation that could not reach its tolerance (CLI exit 4).

class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// Carries the partial estimate so callers can still inspect how far the
// computation got (e.g. a quadrature that ran out of subdivisions).
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& what, double partial_estimate,
                double achieved_tolerance)
      : std::runtime_error(what),
        partial_estimate_(partial_estimate),
        achieved_tolerance_(achieved_tolerance) {}

  double partial_estimate() const { return partial_estimate_; }
  double achieved_tolerance() const { return achieved_tolerance_; }

 private:
  double partial_estimate_;
  double achieved_tolerance_;
};

}  // namespace hazpot
