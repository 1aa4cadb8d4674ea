#include "blowup/errors.hpp"

namespace blowup {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::domain_violation: return "DomainViolation";
    case Errc::delta_zero: return "DeltaZero";
    case Errc::regime_mismatch: return "RegimeMismatch";
    case Errc::epsilon_too_large: return "EpsilonTooLarge";
    case Errc::singular_radius: return "SingularRadius";
    case Errc::positivity_violation: return "PositivityViolation";
    case Errc::step_failure: return "StepFailure";
    case Errc::no_blowup_within_budget: return "NoBlowupWithinBudget";
    case Errc::tail_too_short: return "TailTooShort";
    case Errc::not_blownup: return "NotBlownUp";
    case Errc::not_normalized: return "NotNormalized";
    case Errc::singular_time: return "SingularTime";
    case Errc::non_differentiable_point: return "NonDifferentiablePoint";
    case Errc::unexpected_equilibrium: return "UnexpectedEquilibrium";
    case Errc::spectral_failure: return "SpectralFailure";
    case Errc::insufficient_tail: return "InsufficientTail";
    case Errc::config_error: return "ConfigError";
  }
  return "UnknownError";
}

void fail(Errc code, const std::string& what) {
  throw Error(code, std::string(errc_name(code)) + ": " + what);
}

}  // namespace blowup
