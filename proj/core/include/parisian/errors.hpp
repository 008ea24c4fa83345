#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace parisian {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical kernel could not reach the requested tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_bound)
      : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

// The two-barrier denominator vanished. Carries the intermediate values.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, std::map<std::string, double> breakdown)
      : std::runtime_error(what), breakdown_(std::move(breakdown)) {}

  const std::map<std::string, double>& breakdown() const noexcept { return breakdown_; }

 private:
  std::map<std::string, double> breakdown_;
};

}  // namespace parisian
