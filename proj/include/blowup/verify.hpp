#pragma once

#include <vector>

#include "blowup/dynsys.hpp"
#include "blowup/params.hpp"
#include "blowup/radial.hpp"

namespace blowup {

// Normalized boundary profiles; all three tend to 1 as r -> 1 when the
// asymptotic law holds with the predicted constants.
struct AbcSample {
  double r = 0;
  double a = 0;  // u'(r) (1-r)^{alpha0} / lambda
  double b = 0;  // v(r)  (1-r)^{beta0}  / mu
  double c = 0;  // v'(r) (1-r)^{gamma0} / nu
};

struct ProfileABC {
  std::vector<AbcSample> samples;
  // RMS over interior grid points of (1-r) b' - beta0 (c - b), with b'
  // from a 3-point nonuniform centered difference. Identically zero for the
  // exact solution.
  double eq_residual_rms = 0;
};

struct RateFit {
  double alpha0_hat = 0;
  double beta0_hat = 0;
  double lambda_hat = 0;
  double mu_hat = 0;
  double fit_lo = 0, fit_hi = 0;  // window in 1-r
  double residual = 0;            // worst RMS of the two log-log regressions
  long n_samples = 0;
};

enum class UBehavior { u_bounded, u_log_blowup, u_power_blowup };
const char* u_behavior_name(UBehavior b);

struct ConvergenceReport {
  double final_distance = 0;      // max coordinate distance to (1,1,1) at last sample
  bool converged = false;
  double first_converged_r = 0;   // first radius after which distance stays < tol
};

// Requires a unit-normalized blown-up solution (R_hat = 1). Throws
// not_normalized otherwise.
ProfileABC transform_abc(const RadialSolution& sol,
                         const AsymptoticConstants& ac,
                         const DerivedExponents& ex);

// Log-log least squares of u' and v against 1-r over the window. Throws
// insufficient_tail with fewer than 30 samples in the window.
RateFit fit_rates(const RadialSolution& sol, double fit_lo = 1e-6,
                  double fit_hi = 1e-2);

// alpha0 < 1: u stays bounded; alpha0 = 1 (within 1e-12): logarithmic
// blow-up; alpha0 > 1: power blow-up of u itself.
UBehavior classify_u_behavior(const RadialSolution& sol,
                              const DerivedExponents& ex);

ConvergenceReport check_convergence(const ProfileABC& profile, double tol);

// The same profile as a log-time trajectory: X = a^{p-1-alpha}, Y = b,
// Z = c^{p-1}, t = -ln(1-r).
Trajectory profile_to_log_time(const ProfileABC& profile,
                               const DerivedExponents& ex, const ParamSet& ps);

// RMS defect of the non-autonomous field along a trajectory, derivatives by
// 5-point 4th-order nonuniform finite differences on interior points.
double nonautonomous_residual_rms(const Trajectory& traj,
                                  const DerivedExponents& ex,
                                  const ParamSet& ps);

// Trapezoid quadrature of u'(r) over the sample grid: u(r_last) - u(r_first).
double quadrature_u_gain(const RadialSolution& sol);

}  // namespace blowup
