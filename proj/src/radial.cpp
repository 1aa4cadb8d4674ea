#include "blowup/radial.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "blowup/errors.hpp"
#include "blowup/ode45.hpp"

namespace blowup {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Coefficients the right-hand side uses on every call.
struct RadialCoeffs {
  double gamma, gN;      // gamma, gamma/(N-1)
  double Nm1;            // N-1
  double m, beta;
  double sigma;          // q/(p-1-alpha)
  double inv_pm1;        // 1/(p-1)
};

RadialCoeffs make_coeffs(const ParamSet& ps, const DerivedExponents& ex) {
  RadialCoeffs c;
  c.gamma = ex.gamma;
  c.Nm1 = ps.N - 1;
  c.gN = ex.gamma / c.Nm1;
  c.m = ps.m;
  c.beta = ps.beta;
  c.sigma = ps.q / (ps.p - 1 - ps.alpha);
  c.inv_pm1 = 1.0 / (ps.p - 1);
  return c;
}

// Stage values can dip infinitesimally negative; clamp the fluxes so the
// fractional powers stay real. A negative v is left alone on purpose: the
// resulting NaN makes the controller reject the step.
OdeState<3> rhs_impl(const RadialCoeffs& c, double r, const OdeState<3>& y) {
  double W = std::max(y[0], 0.0);
  double v = y[1];
  double S = std::max(y[2], 0.0);
  OdeState<3> dy;
  dy[0] = c.gN * std::pow(v, c.m) - (c.gamma / r) * W;
  dy[1] = std::pow(S, c.inv_pm1);
  dy[2] = std::pow(v, c.beta) * std::pow(W, c.sigma) - (c.Nm1 / r) * S;
  return dy;
}

}  // namespace

double RadialSolution::U(std::size_t i) const {
  return std::pow(samples[i].W, 1.0 / (params.p - 1 - params.alpha));
}

double RadialSolution::V(std::size_t i) const {
  return std::pow(samples[i].S, 1.0 / (params.p - 1));
}

RadialState series_start(const ParamSet& ps, const DerivedExponents& ex,
                         double v0, double epsilon, double rel_tol) {
  if (!(v0 > 0))
    fail(Errc::domain_violation, "v0 must be positive, got " + fmt(v0));
  if (!(epsilon > 0))
    fail(Errc::domain_violation, "epsilon must be positive, got " + fmt(epsilon));
  if (epsilon > 1e-3)
    fail(Errc::epsilon_too_large,
         "series handoff is only first-order accurate; epsilon = " +
             fmt(epsilon) + " exceeds 1e-3");

  double pm1 = ps.p - 1;
  double sigma = ps.q / (ps.p - 1 - ps.alpha);
  double K = ex.gamma * std::pow(v0, ps.m) / ((ps.N - 1) * (ex.gamma + 1));

  RadialState st;
  st.r = epsilon;
  st.W = K * epsilon;
  double s_amp = std::pow(v0, ps.beta) * std::pow(K, sigma) / (ps.N + sigma);
  st.S = s_amp * std::pow(epsilon, 1 + sigma);
  double v_exp = (1 + sigma) / pm1 + 1;  // v - v0 ~ r^{v_exp}
  st.v = v0 + std::pow(s_amp, 1 / pm1) * std::pow(epsilon, v_exp) / v_exp;

  // The dropped terms perturb the W-equation source v^m by a relative
  // m (v(eps)-v0)/v0; insist that stays below the integration tolerance.
  double remainder = ps.m * (st.v - v0) / v0;
  if (remainder > rel_tol)
    fail(Errc::epsilon_too_large,
         "series remainder estimate " + fmt(remainder) +
             " exceeds rel_tol = " + fmt(rel_tol) +
             " at epsilon = " + fmt(epsilon));
  return st;
}

std::array<double, 3> rhs_radial(const RadialState& st, const ParamSet& ps,
                                 const DerivedExponents& ex) {
  if (!(st.r > 0))
    fail(Errc::singular_radius, "rhs needs r > 0, got r = " + fmt(st.r));
  if (!(st.v > 0))
    fail(Errc::positivity_violation, "rhs needs v > 0, got v = " + fmt(st.v));
  RadialCoeffs c = make_coeffs(ps, ex);
  return rhs_impl(c, st.r, {st.W, st.v, st.S});
}

RadialSolution integrate_radial(const ParamSet& ps, const DerivedExponents& ex,
                                double v0, const IntegratorOptions& opts) {
  RadialCoeffs c = make_coeffs(ps, ex);
  RadialState start =
      series_start(ps, ex, v0, opts.epsilon_start, opts.rel_tol);

  RadialSolution sol;
  sol.params = ps;
  sol.v0 = v0;
  sol.options = opts;
  sol.samples.push_back(start);

  // Near blow-up the asymptotic law predicts the remaining distance
  // (mu/v)^{1/beta0}; capping the step at a fraction of it resolves the
  // approach. The fraction shrinks with beta0 so every decade of v gets a
  // few samples regardless of how fast v grows per unit radius. Outside
  // the blow-up regime there is no such distance.
  bool blowup_regime = in_blowup_regime(ex);
  double mu = 0, inv_beta0 = 0, cap_frac = 0.1;
  if (blowup_regime) {
    mu = compute_constants(ex, ps).mu;
    inv_beta0 = 1.0 / ex.beta0;
    cap_frac = std::min(0.1, 0.4 / ex.beta0);
  }
  double base_cap = opts.max_step > 0
                        ? opts.max_step
                        : 0.2 * std::sqrt(opts.rel_tol);
  bool auto_cap = opts.max_step <= 0;

  auto cap = [&](double r, const OdeState<3>& y) {
    double h = auto_cap ? base_cap * std::max(1.0, r) : base_cap;
    if (blowup_regime && y[1] > 0) {
      double dist = std::pow(mu / y[1], inv_beta0);
      h = std::min(h, cap_frac * dist);
    }
    return h;
  };

  auto rhs = [&](double r, const OdeState<3>& y) { return rhs_impl(c, r, y); };

  bool hit_threshold = false;
  auto on_accept = [&](double r, const OdeState<3>& y) {
    sol.samples.push_back({r, y[0], y[1], y[2]});
    if (y[1] >= opts.v_blowup_threshold) {
      hit_threshold = true;
      return false;
    }
    return true;
  };

  OdeControl ctl;
  ctl.rel_tol = opts.rel_tol;
  ctl.abs_tol = opts.abs_tol;
  ctl.h_init = opts.epsilon_start / 4;
  ctl.max_steps = opts.max_steps;

  OdeState<3> y0 = {start.W, start.v, start.S};
  OdeResult<3> res =
      ode45<3>(rhs, start.r, y0, std::numeric_limits<double>::infinity(), ctl,
               cap, on_accept);

  sol.blowup_detected = hit_threshold;
  if (hit_threshold) return sol;

  if (res.status == OdeStatus::max_steps)
    fail(Errc::no_blowup_within_budget,
         "v reached " + fmt(res.y[1]) + " after " +
             std::to_string(res.n_accepted) + " accepted steps (r = " +
             fmt(res.t) + ") without hitting the threshold " +
             fmt(opts.v_blowup_threshold));
  fail(Errc::step_failure,
       "integrator stalled at r = " + fmt(res.t) + ", v = " + fmt(res.y[1]));
}

double estimate_blowup_radius(const RadialSolution& sol,
                              const AsymptoticConstants& ac,
                              const DerivedExponents& ex) {
  if (!sol.blowup_detected)
    fail(Errc::not_blownup, "cannot place a blow-up radius without blow-up");
  double thr = sol.options.v_blowup_threshold;
  long tail = 0;
  for (const RadialState& s : sol.samples)
    if (s.v > 0.01 * thr) ++tail;
  if (tail < 10)
    fail(Errc::tail_too_short,
         "only " + std::to_string(tail) +
             " samples above 0.01 * threshold; the tail inversion needs 10");

  const RadialState& last = sol.samples.back();
  return last.r + std::pow(ac.mu / last.v, 1.0 / ex.beta0);
}

double phi_map(const ParamSet& ps, const DerivedExponents& ex, double v0,
               const IntegratorOptions& opts) {
  AsymptoticConstants ac = compute_constants(ex, ps);
  RadialSolution sol = integrate_radial(ps, ex, v0, opts);
  return estimate_blowup_radius(sol, ac, ex);
}

RadialSolution normalize_to_unit(const RadialSolution& sol,
                                 const DerivedExponents& ex) {
  if (!sol.blowup_detected)
    fail(Errc::not_blownup, "normalization needs a blown-up solution");
  if (!(sol.R_hat > 0))
    fail(Errc::not_blownup, "normalization needs an estimated R_hat");

  double R = sol.R_hat;
  double pma = sol.params.p - 1 - sol.params.alpha;
  double pm1 = sol.params.p - 1;
  double sW = std::pow(R, ex.alpha0 * pma);
  double sv = std::pow(R, ex.beta0);
  double sS = std::pow(R, ex.gamma0 * pm1);

  RadialSolution out = sol;
  out.R_hat = 1.0;
  out.v0 = sv * sol.v0;
  out.options.v_blowup_threshold = sv * sol.options.v_blowup_threshold;
  for (RadialState& s : out.samples) {
    s.r /= R;
    s.W *= sW;
    s.v *= sv;
    s.S *= sS;
  }
  return out;
}

}  // namespace blowup
