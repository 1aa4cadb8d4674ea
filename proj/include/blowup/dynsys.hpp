#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "blowup/params.hpp"

namespace blowup {

// Log-time picture: t = -ln(1-r) maps the unit-ball tail onto t -> infinity.
// With a = u'(r)(1-r)^{alpha0}/lambda, b = v(1-r)^{beta0}/mu,
// c = v'(r)(1-r)^{gamma0}/nu, the substitution X = a^{p-1-alpha}, Y = b,
// Z = c^{p-1} turns the profile equations into
//   X' = alpha0(p-1-alpha) (|Y|^{m-1}Y - X)          - gamma/(e^t-1) X
//   Y' = beta0 (|Z|^{1/(p-1)-1}Z - Y)
//   Z' = gamma0(p-1) (|Y|^{beta-1}Y |X|^{q/(p-1-alpha)-1}X - Z)
//                                                     - (N-1)/(e^t-1) Z
// where the e^t terms are dropped in the autonomous limit.

struct State3 {
  double X = 0, Y = 0, Z = 0;
};

enum class FlowKindTag { autonomous, nonautonomous_log_time };

struct FlowKind {
  FlowKindTag tag = FlowKindTag::autonomous;
  double t0 = 0;  // start time; must be > 0 for the non-autonomous flow
};

struct FlowOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  long max_steps = 200000;
};

struct FlowSample {
  double t = 0;
  State3 s;
};

struct Trajectory {
  FlowKind kind;
  std::vector<FlowSample> samples;
};

// Signed power |x|^{k-1} x, extended by 0 at x = 0 (k > 0).
double signed_pow(double x, double k);

State3 rhs_autonomous(const State3& s, const DerivedExponents& ex,
                      const ParamSet& ps);

// Throws singular_time for t <= 0.
State3 rhs_nonautonomous(double t, const State3& s, const DerivedExponents& ex,
                         const ParamSet& ps);

// Jacobian of the autonomous field. Tabulated at the two equilibria
// ((0,0,0) -> diag(-alpha0(p-1-alpha), -beta0, -gamma0(p-1)), (1,1,1) -> M1);
// elsewhere the analytic formula, throwing non_differentiable_point when a
// zero coordinate meets an exponent below 1.
Eigen::Matrix3d jacobian_at(const State3& s, const DerivedExponents& ex,
                            const ParamSet& ps);

// det(lambda I - M1) = lambda^3 + C1 lambda^2 + C2 lambda + C3 with
//   C1 = alpha0(p-1-alpha) + beta0 + gamma0(p-1)
//   C2 = beta0 gamma0 (p-1-beta) + alpha0(p-1-alpha)(beta0 + gamma0(p-1))
//   C3 = alpha0 beta0 gamma0 delta
// Always C1 + C2 + C3 = -1, i.e. 1 is an eigenvalue of M1.
std::array<double, 3> char_poly_coeffs(const DerivedExponents& ex,
                                       const ParamSet& ps);

enum class Stability { sink, saddle_stable_dim2 };
const char* stability_name(Stability s);

struct EquilibriumReport {
  std::vector<State3> points;  // canonicalized
  std::vector<Eigen::Matrix3d> jacobians;
  std::array<double, 3> char_coeffs{};  // C1, C2, C3 at (1,1,1)
  std::vector<std::array<std::complex<double>, 3>> eigenvalues;
  std::vector<Stability> stability;
  long newton_starts = 0;
  long newton_converged = 0;
};

// Damped-Newton sweep from a 6^3 lattice over [-0.5, 2]^3 plus seeded random
// starts. Converged roots must be exactly the two known equilibria after
// deduplication; anything else throws unexpected_equilibrium.
EquilibriumReport find_equilibria(const DerivedExponents& ex,
                                  const ParamSet& ps,
                                  std::uint64_t seed = 0x62756c61u);

// Full spectral report for both equilibria. Eigenvalues of M1 come from the
// characteristic-polynomial route (factor out the known root 1) and are
// cross-checked against a direct matrix eigensolver; disagreement beyond
// 1e-9 throws spectral_failure.
EquilibriumReport eigen_report(const DerivedExponents& ex, const ParamSet& ps);

// Integrate either flow; start time is 0 (autonomous) or kind.t0.
Trajectory integrate_flow(FlowKind kind, const State3& s0, double t_end,
                          const DerivedExponents& ex, const ParamSet& ps,
                          const FlowOptions& opts = {});

}  // namespace blowup
