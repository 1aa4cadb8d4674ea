#pragma once

#include <string>

namespace blowup {

// Parameters of the coupled system
//   div(|grad u|^{p-2} grad u) = v^m |grad u|^alpha
//   div(|grad v|^{p-2} grad v) = v^beta |grad u|^q
// on a ball in R^N, radial setting.
struct ParamSet {
  double p = 2;      // p > 1
  int N = 3;         // space dimension, N >= 2
  double m = 1;      // m > 0
  double q = 1;      // q > 0
  double alpha = 0;  // 0 <= alpha < p-1
  double beta = 0;   // 0 <= beta <= m
};

// Exponent bundle controlling the boundary asymptotics:
//   u'(r) ~ lambda (1-r)^{-alpha0},  v(r) ~ mu (1-r)^{-beta0},
//   v'(r) ~ nu (1-r)^{-gamma0},      gamma0 = beta0 + 1.
struct DerivedExponents {
  double delta = 0;   // (p-1-alpha)(p-1-beta) - m q, the regime discriminant
  double gamma = 0;   // (N-1)(p-1-alpha)/(p-1), radial drift coefficient
  double alpha0 = 0;
  double beta0 = 0;
  double gamma0 = 0;
};

struct AsymptoticConstants {
  double lambda = 0;
  double mu = 0;
  double nu = 0;  // nu = beta0 * mu
};

enum class RegimeTag { GlobalBounded, BlowupBoth, BlowupVOnly, Invalid };
const char* regime_name(RegimeTag tag);

struct Regime {
  RegimeTag tag = RegimeTag::Invalid;
  double delta_threshold = 0;  // -m p - (p-1-beta); splits the two blow-up modes
  std::string note;
};

// Throws Error(domain_violation) on any bound violation and
// Error(delta_zero) when |delta| <= 1e-14 (degenerate coupling).
ParamSet validate_params(double p, double N, double m, double q, double alpha,
                         double beta);

DerivedExponents derive_exponents(const ParamSet& ps);

// delta < 0 (alpha0 > 0 follows automatically inside the domain).
bool in_blowup_regime(const DerivedExponents& ex);

// Closed-form lambda, mu, nu. Throws Error(regime_mismatch) outside the
// blow-up regime, where the constants are undefined.
AsymptoticConstants compute_constants(const DerivedExponents& ex,
                                      const ParamSet& ps);

Regime classify_regime(const DerivedExponents& ex, const ParamSet& ps);

// Residuals of the two exponent identities
//   alpha0 (p-1-alpha) + 1 - m beta0       (A)
//   gamma0 (p-1) + 1 - beta beta0 - alpha0 q   (B)
// Zero in exact arithmetic for any valid ParamSet.
struct IdentityResiduals {
  double a = 0;
  double b = 0;
};
IdentityResiduals exponent_identity_residuals(const DerivedExponents& ex,
                                              const ParamSet& ps);

// Log-space residuals of the three constant relations
//   lambda^{p-1-alpha} alpha0 = mu^m / (p-1)
//   mu^beta lambda^q = gamma0 (p-1) nu^{p-1}
//   beta0 mu = nu
// Each entry is ln(lhs) - ln(rhs), which agrees with the relative residual
// to first order and cannot overflow for representable constants.
struct ConstantResiduals {
  double r1 = 0, r2 = 0, r3 = 0;
  double max_abs() const;
};
ConstantResiduals constant_relation_residuals(const AsymptoticConstants& ac,
                                              const DerivedExponents& ex,
                                              const ParamSet& ps);

}  // namespace blowup
