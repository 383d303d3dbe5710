#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vgstein {

// Precondition violated (bad order, argument, parameters, law, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Result not representable in double precision.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// Numerical procedure failed to meet its tolerance. Carries the best
// estimate reached so the caller can decide whether it is usable.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_(best_estimate), err_(error_estimate) {}

  double best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return err_; }

 private:
  double best_;
  double err_;
};

// A simulation ran out of its time budget.
class PartialResultError : public std::runtime_error {
 public:
  PartialResultError(const std::string& what, std::size_t completed)
      : std::runtime_error(what), completed_(completed) {}

  std::size_t completed_samples() const noexcept { return completed_; }

 private:
  std::size_t completed_;
};

// Too few usable points for a regression.
class InsufficientSignalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vgstein
