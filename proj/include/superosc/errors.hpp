#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace superosc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at (or numerically on top of) a singular time of the flow.
class CausticError : public Error {
 public:
  CausticError(const std::string& what, double singular_time)
      : Error(what), singular_time_(singular_time) {}

  /// The nearest singular time t* to the requested evaluation.
  double singular_time() const noexcept { return singular_time_; }

 private:
  double singular_time_;
};

/// A numerical procedure failed to reach its tolerance.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double achieved,
               std::vector<std::complex<double>> trail = {})
      : Error(what), achieved_(achieved), trail_(std::move(trail)) {}

  double achieved_tolerance() const noexcept { return achieved_; }
  /// Intermediate values (e.g. the regularized integrals per beta).
  const std::vector<std::complex<double>>& trail() const noexcept { return trail_; }

 private:
  double achieved_;
  std::vector<std::complex<double>> trail_;
};

/// An input failed a verifiable precondition; carries the measured defect.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double defect)
      : Error(what), defect_(defect) {}

  double measured_defect() const noexcept { return defect_; }

 private:
  double defect_;
};

}  // namespace superosc
