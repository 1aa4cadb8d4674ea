#include "blowup/sampling.hpp"

#include <cmath>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

// Conditioning guard: identity checks carry absolute tolerances, so the
// terms entering them must stay small enough that double roundoff cannot
// masquerade as a formula error; the asymptotic constants and every power
// of them appearing in the relation residuals must stay representable.
bool well_conditioned(const ParamSet& ps, const DerivedExponents& ex) {
  double pma = ps.p - 1 - ps.alpha;
  double pm1 = ps.p - 1;
  double a_term = std::abs(ex.alpha0) * pma;
  double b_term = ps.m * std::abs(ex.beta0);
  double g_term = std::abs(ex.gamma0) * pm1;
  double q_term = ps.beta * std::abs(ex.beta0) + std::abs(ex.alpha0) * ps.q;
  if (std::max({a_term, b_term, g_term, q_term}) > 200) return false;

  // Spectral checks (coefficient sums, determinants) also carry absolute
  // tolerances; their roundoff scales with products of the linearization
  // rates, so cap the rates themselves.
  if (std::max({a_term, std::abs(ex.beta0), g_term}) > 50) return false;

  if (!in_blowup_regime(ex)) return true;
  double lg = std::log(ex.gamma0 * pm1) + pm1 * std::log(ex.beta0);
  double la = std::log(ex.alpha0 * pm1);
  double ln_lambda = -(ps.m / ex.delta) * (lg + ((ps.p - 1 - ps.beta) / ps.m) * la);
  double ln_mu = -(pma / ex.delta) * (lg + (ps.q / pma) * la);
  if (std::abs(ln_lambda) > 100 || std::abs(ln_mu) > 100) return false;
  double ln_nu = std::log(ex.beta0) + ln_mu;
  double worst = std::max({std::abs(ln_lambda) * std::max(pma, ps.q),
                           std::abs(ln_mu) * std::max(ps.m, ps.beta),
                           std::abs(ln_nu) * pm1});
  return worst < 500;
}

}  // namespace

ParamSampler::ParamSampler(std::uint64_t seed)
    : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

double ParamSampler::next_unit() {
  state_ ^= state_ << 13;
  state_ ^= state_ >> 7;
  state_ ^= state_ << 17;
  return static_cast<double>(state_ >> 11) * 0x1.0p-53;
}

double ParamSampler::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_unit();
}

SampledParams ParamSampler::next_blowup() {
  for (;;) {
    double p = uniform(1.2, 4.0);
    double alpha = uniform(0.0, 0.9 * (p - 1));
    double m = uniform(0.2, 3.0);
    double beta = uniform(0.0, m);
    double x = (p - 1 - alpha) * (p - 1 - beta);
    double q_lo = x / m;  // delta = 0 along q = q_lo (when x > 0)
    double u = uniform(0.05, 1.0);
    double q = q_lo > 0 ? q_lo * (1 + 3 * u) : 3 * u;
    ParamSet ps;
    try {
      ps = validate_params(p, 3, m, q, alpha, beta);
    } catch (const Error&) {
      continue;
    }
    DerivedExponents ex = derive_exponents(ps);
    if (!in_blowup_regime(ex)) continue;
    if (!well_conditioned(ps, ex)) continue;
    return {ps, ex};
  }
}

SampledParams ParamSampler::next_blowup_side(bool below_threshold) {
  for (;;) {
    double p = uniform(1.2, 4.0);
    double alpha = uniform(0.0, 0.9 * (p - 1));
    double m = uniform(0.2, 3.0);
    double beta = uniform(0.0, m);
    double x = (p - 1 - alpha) * (p - 1 - beta);
    double split = m * p + (p - 1 - beta);  // delta threshold is -split
    double q;
    if (below_threshold) {
      // delta < -split: q = (x + split (1+u)) / m
      q = (x + split * (1 + uniform(0.05, 1.0))) / m;
    } else {
      // delta in (-split, 0): q = (x + t split) / m, t in (0, 1)
      q = (x + split * uniform(0.05, 0.95)) / m;
    }
    ParamSet ps;
    try {
      ps = validate_params(p, 3, m, q, alpha, beta);
    } catch (const Error&) {
      continue;
    }
    DerivedExponents ex = derive_exponents(ps);
    if (!in_blowup_regime(ex)) continue;
    if (!well_conditioned(ps, ex)) continue;
    bool below = ex.delta < -split;
    if (below != below_threshold) continue;
    return {ps, ex};
  }
}

}  // namespace blowup
