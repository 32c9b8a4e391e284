#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace annulus {

enum class ErrorCode {
  UnknownMetric,
  BadParameter,
  OutOfDomain,
  NoConvergence,
  DivergentIntegral,
  NoBracket,
  StepUnderflow,
  BelowCritical,
  DivergentModulus,
  ProfileMismatch,
  NegativeRadicand,
  OutOfAnnulus,
  StencilOutOfDomain,
  PerturbationLeavesRange,
};

std::string_view to_string(ErrorCode code);

/// Base of every error thrown by the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// The requested domain annulus is fatter than the critical configuration
/// allows. Carries the critical inner radius (0 when the modulus diverges).
class BelowCriticalError : public Error {
 public:
  BelowCriticalError(double critical_r, const std::string& what);
  double critical_r() const noexcept { return critical_r_; }

 private:
  double critical_r_;
};

}  // namespace annulus
