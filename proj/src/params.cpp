#include "blowup/params.hpp"

#include <cmath>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

const char* regime_name(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::GlobalBounded: return "GlobalBounded";
    case RegimeTag::BlowupBoth: return "BlowupBoth";
    case RegimeTag::BlowupVOnly: return "BlowupVOnly";
    case RegimeTag::Invalid: return "Invalid";
  }
  return "Invalid";
}

ParamSet validate_params(double p, double N, double m, double q, double alpha,
                         double beta) {
  if (!(std::isfinite(p) && std::isfinite(N) && std::isfinite(m) &&
        std::isfinite(q) && std::isfinite(alpha) && std::isfinite(beta)))
    fail(Errc::domain_violation, "parameters must be finite");
  if (!(p > 1)) fail(Errc::domain_violation, "p must exceed 1, got " + fmt(p));
  if (!(N >= 2) || N != std::floor(N))
    fail(Errc::domain_violation, "N must be an integer >= 2, got " + fmt(N));
  if (!(m > 0)) fail(Errc::domain_violation, "m must be positive, got " + fmt(m));
  if (!(q > 0)) fail(Errc::domain_violation, "q must be positive, got " + fmt(q));
  if (!(alpha >= 0 && alpha < p - 1))
    fail(Errc::domain_violation,
         "alpha must satisfy 0 <= alpha < p-1, got alpha = " + fmt(alpha) +
             " with p-1 = " + fmt(p - 1));
  if (!(beta >= 0 && beta <= m))
    fail(Errc::domain_violation,
         "beta must satisfy 0 <= beta <= m, got beta = " + fmt(beta) +
             " with m = " + fmt(m));

  double delta = (p - 1 - alpha) * (p - 1 - beta) - m * q;
  if (std::abs(delta) <= 1e-14)
    fail(Errc::delta_zero,
         "delta = (p-1-alpha)*(p-1-beta) - m*q must be nonzero; got delta = " +
             fmt(delta));

  ParamSet ps;
  ps.p = p;
  ps.N = static_cast<int>(N);
  ps.m = m;
  ps.q = q;
  ps.alpha = alpha;
  ps.beta = beta;
  return ps;
}

DerivedExponents derive_exponents(const ParamSet& ps) {
  DerivedExponents ex;
  double pma = ps.p - 1 - ps.alpha;  // p-1-alpha
  double pmb = ps.p - 1 - ps.beta;   // p-1-beta
  ex.delta = pma * pmb - ps.m * ps.q;
  ex.gamma = (ps.N - 1) * pma / (ps.p - 1);
  ex.alpha0 = (1 + ps.beta - ps.p * (ps.m + 1)) / ex.delta;
  ex.beta0 = -(ps.p * pma + ps.q) / ex.delta;
  ex.gamma0 = ex.beta0 + 1;
  return ex;
}

bool in_blowup_regime(const DerivedExponents& ex) {
  return ex.delta < 0 && ex.alpha0 > 0;
}

AsymptoticConstants compute_constants(const DerivedExponents& ex,
                                      const ParamSet& ps) {
  if (!in_blowup_regime(ex))
    fail(Errc::regime_mismatch,
         "asymptotic constants require delta < 0 and alpha0 > 0; got delta = " +
             fmt(ex.delta) + ", alpha0 = " + fmt(ex.alpha0));

  double pm1 = ps.p - 1;
  double pma = ps.p - 1 - ps.alpha;
  double pmb = ps.p - 1 - ps.beta;
  // Common log-factor ln(gamma0 (p-1) beta0^{p-1}); the two constants differ
  // only in the power attached to alpha0 (p-1).
  double lg = std::log(ex.gamma0 * pm1) + pm1 * std::log(ex.beta0);
  double la = std::log(ex.alpha0 * pm1);

  AsymptoticConstants ac;
  ac.lambda = std::exp(-(ps.m / ex.delta) * (lg + (pmb / ps.m) * la));
  ac.mu = std::exp(-(pma / ex.delta) * (lg + (ps.q / pma) * la));
  ac.nu = ex.beta0 * ac.mu;
  return ac;
}

Regime classify_regime(const DerivedExponents& ex, const ParamSet& ps) {
  Regime rg;
  rg.delta_threshold = -ps.m * ps.p - (ps.p - 1 - ps.beta);
  if (ex.delta > 0) {
    rg.tag = RegimeTag::GlobalBounded;
    rg.note = "delta > 0: every positive radial solution stays bounded";
  } else if (ex.delta >= rg.delta_threshold) {
    rg.tag = RegimeTag::BlowupBoth;
    rg.note = "delta in [-m*p-(p-1-beta), 0): u and v both blow up "
              "(alpha0 >= 1)";
  } else {
    rg.tag = RegimeTag::BlowupVOnly;
    rg.note = "delta < -m*p-(p-1-beta): v blows up, u stays bounded "
              "(alpha0 < 1)";
  }
  return rg;
}

IdentityResiduals exponent_identity_residuals(const DerivedExponents& ex,
                                              const ParamSet& ps) {
  IdentityResiduals res;
  res.a = ex.alpha0 * (ps.p - 1 - ps.alpha) + 1 - ps.m * ex.beta0;
  res.b = ex.gamma0 * (ps.p - 1) + 1 -
          (ps.beta * ex.beta0 + ex.alpha0 * ps.q);
  return res;
}

double ConstantResiduals::max_abs() const {
  return std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
}

ConstantResiduals constant_relation_residuals(const AsymptoticConstants& ac,
                                              const DerivedExponents& ex,
                                              const ParamSet& ps) {
  double pm1 = ps.p - 1;
  double pma = ps.p - 1 - ps.alpha;
  double ll = std::log(ac.lambda), lm = std::log(ac.mu), ln = std::log(ac.nu);
  ConstantResiduals res;
  res.r1 = pma * ll + std::log(ex.alpha0) - (ps.m * lm - std::log(pm1));
  res.r2 = ps.beta * lm + ps.q * ll -
           (std::log(ex.gamma0 * pm1) + pm1 * ln);
  res.r3 = std::log(ex.beta0) + lm - ln;
  return res;
}

}  // namespace blowup
