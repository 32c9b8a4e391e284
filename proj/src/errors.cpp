#include "annulus/errors.hpp"

namespace annulus {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownMetric: return "UnknownMetric";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::BelowCritical: return "BelowCritical";
    case ErrorCode::DivergentModulus: return "DivergentModulus";
    case ErrorCode::ProfileMismatch: return "ProfileMismatch";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::OutOfAnnulus: return "OutOfAnnulus";
    case ErrorCode::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorCode::PerturbationLeavesRange: return "PerturbationLeavesRange";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

BelowCriticalError::BelowCriticalError(double critical_r, const std::string& what)
    : Error(ErrorCode::BelowCritical, what), critical_r_(critical_r) {}

}  // namespace annulus
