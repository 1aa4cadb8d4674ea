#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "blowup/params.hpp"

namespace blowup {

struct IntegratorOptions {
  double epsilon_start = 1e-6;      // series handoff radius, 0 < eps <= 1e-3
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double v_blowup_threshold = 1e8;  // declare blow-up when v reaches this
  long max_steps = 500000;
  // Extra cap on the step size; 0 selects 0.2*sqrt(rel_tol)*max(1, r), which
  // keeps finite-difference residuals on the sample grid below 10*rel_tol.
  double max_step = 0;
};

// Flux form of the radial system. W = (u')^{p-1-alpha}, S = (v')^{p-1}:
//   W' = (gamma/(N-1)) v^m - (gamma/r) W
//   v' = S^{1/(p-1)}
//   S' = v^beta W^{q/(p-1-alpha)} - ((N-1)/r) S
struct RadialState {
  double r = 0;
  double W = 0;
  double v = 0;
  double S = 0;
};

struct RadialSolution {
  ParamSet params;
  std::vector<RadialState> samples;  // one row per accepted step
  double v0 = 0;
  bool blowup_detected = false;
  double R_hat = 0;  // estimated blow-up radius; 0 until estimated
  IntegratorOptions options;

  double U(std::size_t i) const;  // u'(r_i), recovered from W
  double V(std::size_t i) const;  // v'(r_i), recovered from S
};

// First-order series solution at r = eps, resolving the r = 0 singularity:
//   W(eps) = K eps,  K = gamma v0^m / ((N-1)(gamma+1))
//   S(eps) = v0^beta K^{q/(p-1-alpha)} eps^{1+q/(p-1-alpha)} / (N + q/(p-1-alpha))
//   v(eps) = v0 + leading quadrature of S^{1/(p-1)}
// Throws epsilon_too_large when the neglected remainder exceeds rel_tol.
RadialState series_start(const ParamSet& ps, const DerivedExponents& ex,
                         double v0, double epsilon, double rel_tol = 1e-8);

// d/dr (W, v, S). Throws singular_radius for r <= 0 and positivity_violation
// for v <= 0.
std::array<double, 3> rhs_radial(const RadialState& st, const ParamSet& ps,
                                 const DerivedExponents& ex);

// Integrates from the series handoff until v >= v_blowup_threshold or the
// step budget runs out. Throws no_blowup_within_budget if the threshold is
// never reached and step_failure if the stepper stalls.
RadialSolution integrate_radial(const ParamSet& ps, const DerivedExponents& ex,
                                double v0, const IntegratorOptions& opts);

// Inverts v ~ mu (R - r)^{-beta0} at the last sample:
//   R_hat = r_last + (mu / v_last)^{1/beta0}.
// Throws not_blownup without a detected blow-up and tail_too_short when
// fewer than 10 samples lie above 0.01 * threshold.
double estimate_blowup_radius(const RadialSolution& sol,
                              const AsymptoticConstants& ac,
                              const DerivedExponents& ex);

// v0 -> blow-up radius. Strictly decreasing; obeys the scaling law
// v0 * phi(v0)^{beta0} = const.
double phi_map(const ParamSet& ps, const DerivedExponents& ex, double v0,
               const IntegratorOptions& opts);

// Rescale onto the unit ball: r -> r/R, W -> R^{alpha0(p-1-alpha)} W,
// v -> R^{beta0} v, S -> R^{gamma0(p-1)} S, using sol.R_hat.
RadialSolution normalize_to_unit(const RadialSolution& sol,
                                 const DerivedExponents& ex);

}  // namespace blowup
