#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

// Every failure mode the library reports, one flat enum so callers (and the
// CLI exit-code mapping) can switch on the kind without string matching.
enum class Errc {
  domain_violation,
  delta_zero,
  regime_mismatch,
  epsilon_too_large,
  singular_radius,
  positivity_violation,
  step_failure,
  no_blowup_within_budget,
  tail_too_short,
  not_blownup,
  not_normalized,
  singular_time,
  non_differentiable_point,
  unexpected_equilibrium,
  spectral_failure,
  insufficient_tail,
  config_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace blowup
