#include <doctest.h>

#include <cmath>
#include <cstddef>

#include "blowup/errors.hpp"
#include "blowup/interp.hpp"
#include "blowup/radial.hpp"

using namespace blowup;

namespace {

ParamSet base_ps() { return validate_params(2, 3, 1, 2, 0, 0); }

RadialSolution solve_base(double v0, IntegratorOptions opts = {}) {
  ParamSet ps = base_ps();
  return integrate_radial(ps, derive_exponents(ps), v0, opts);
}

}  // namespace

TEST_CASE("series start, reference set") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  double eps = 1e-4;
  RadialState st = series_start(ps, ex, 1.0, eps);
  CHECK(st.r == eps);
  // K = gamma/((N-1)(gamma+1)) = 1/3; sigma = 2
  CHECK(st.W == doctest::Approx(eps / 3.0).epsilon(1e-13));
  CHECK(st.S == doctest::Approx(eps * eps * eps / 45.0).epsilon(1e-13));
  CHECK(st.v == doctest::Approx(1.0 + std::pow(eps, 4) / 180.0).epsilon(1e-15));
}

TEST_CASE("series start rejects a handoff outside its validity range") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  CHECK_THROWS_AS(series_start(ps, ex, 1.0, 0.5), Error);
  CHECK_THROWS_AS(series_start(ps, ex, 1.0, 2e-3), Error);
  try {
    series_start(ps, ex, 1.0, 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::epsilon_too_large);
  }
}

TEST_CASE("flux-form right-hand side, hand value") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  RadialState st{1.0, 1.0, 1.0, 1.0};
  auto d = rhs_radial(st, ps, ex);
  CHECK(d[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(d[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d[2] == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("right-hand side guards") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  RadialState at_zero{0.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(rhs_radial(at_zero, ps, ex), Error);
  RadialState neg_v{0.5, 1.0, -1.0, 1.0};
  CHECK_THROWS_AS(rhs_radial(neg_v, ps, ex), Error);
}

TEST_CASE("integration reaches the threshold and stays monotone") {
  RadialSolution sol = solve_base(1.0);
  REQUIRE(sol.blowup_detected);
  REQUIRE(sol.samples.size() > 100);
  CHECK(sol.samples.back().v >= sol.options.v_blowup_threshold);
  for (std::size_t i = 1; i < sol.samples.size(); ++i) {
    CHECK(sol.samples[i].r > sol.samples[i - 1].r);
    CHECK(sol.samples[i].v >= sol.samples[i - 1].v);  // v' = S^{1/(p-1)} >= 0
    CHECK(sol.samples[i].W > 0);
    CHECK(sol.samples[i].S > 0);
  }
}

TEST_CASE("radius estimate is threshold-robust") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  AsymptoticConstants ac = compute_constants(ex, ps);

  IntegratorOptions lo;
  lo.v_blowup_threshold = 1e4;
  IntegratorOptions hi;
  hi.v_blowup_threshold = 1e8;
  double r_lo = estimate_blowup_radius(integrate_radial(ps, ex, 1.0, lo), ac, ex);
  double r_hi = estimate_blowup_radius(integrate_radial(ps, ex, 1.0, hi), ac, ex);
  CHECK(std::abs(r_lo - r_hi) / r_hi <= 1e-3);
}

TEST_CASE("radius estimate is series-handoff-robust") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  IntegratorOptions a;
  a.epsilon_start = 1e-6;
  IntegratorOptions b;
  b.epsilon_start = 5e-7;
  double ra = phi_map(ps, ex, 1.0, a);
  double rb = phi_map(ps, ex, 1.0, b);
  CHECK(std::abs(ra - rb) / rb <= 1e-5);
}

TEST_CASE("identical runs are bit-identical") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  IntegratorOptions opts;
  CHECK(phi_map(ps, ex, 1.0, opts) == phi_map(ps, ex, 1.0, opts));
}

TEST_CASE("blow-up radius decreases in the core value") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  IntegratorOptions opts;
  double r1 = phi_map(ps, ex, 0.5, opts);
  double r2 = phi_map(ps, ex, 1.0, opts);
  double r3 = phi_map(ps, ex, 2.0, opts);
  CHECK(r1 > r2);
  CHECK(r2 > r3);
}

TEST_CASE("scaling law v0 * R^beta0") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  IntegratorOptions opts;
  double lo = 0, hi = 0;
  for (double v0 : {0.5, 1.0, 2.0, 4.0}) {
    double inv = v0 * std::pow(phi_map(ps, ex, v0, opts), ex.beta0);
    if (lo == 0 || inv < lo) lo = inv;
    if (inv > hi) hi = inv;
  }
  CHECK((hi - lo) / lo <= 5e-3);
}

TEST_CASE("tolerance refinement shrinks the radius error at the stepper's order") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  auto radius_at = [&](double tol) {
    IntegratorOptions opts;
    opts.rel_tol = tol;
    opts.abs_tol = tol * 1e-4;
    // The automatic step cap scales with sqrt(rel_tol), so the tightest run
    // needs a few million steps.
    opts.max_steps = 4000000;
    return phi_map(ps, ex, 1.0, opts);
  };
  double r6 = radius_at(1e-6), r8 = radius_at(1e-8), r10 = radius_at(1e-10);
  double coarse = std::abs(r6 - r8), fine = std::abs(r8 - r10);
  CHECK(fine <= 0.5 * coarse + 1e-12 * r8);
}

TEST_CASE("radius estimate inverts a model tail exactly") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  AsymptoticConstants ac = compute_constants(ex, ps);

  RadialSolution sol;
  sol.params = ps;
  sol.blowup_detected = true;
  for (int i = 0; i < 80; ++i) {
    double x = 0.1 * std::pow(1e-4 / 0.1, double(i) / 79);  // x = 0.7 - r
    RadialState st;
    st.r = 0.7 - x;
    st.v = ac.mu * std::pow(x, -ex.beta0);
    st.W = 1;
    st.S = 1;
    sol.samples.push_back(st);
  }
  sol.options.v_blowup_threshold = sol.samples.back().v;

  double R = estimate_blowup_radius(sol, ac, ex);
  CHECK(std::abs(R - 0.7) <= 1e-12);
}

TEST_CASE("radius estimate guards") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  AsymptoticConstants ac = compute_constants(ex, ps);

  RadialSolution not_blown;
  not_blown.params = ps;
  not_blown.blowup_detected = false;
  not_blown.samples.push_back({0.5, 1.0, 1.0, 1.0});
  CHECK_THROWS_AS(estimate_blowup_radius(not_blown, ac, ex), Error);

  RadialSolution stub;
  stub.params = ps;
  stub.blowup_detected = true;
  stub.options.v_blowup_threshold = 1e8;
  for (int i = 0; i < 5; ++i)
    stub.samples.push_back({0.9 + 0.001 * i, 1.0, 2e6 * (i + 1), 1.0});
  try {
    estimate_blowup_radius(stub, ac, ex);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::tail_too_short);
  }
}

TEST_CASE("bounded regime exhausts the budget") {
  ParamSet ps = validate_params(2, 3, 0.5, 1, 0, 0);  // delta = 0.5
  DerivedExponents ex = derive_exponents(ps);
  IntegratorOptions opts;
  opts.max_steps = 30000;
  try {
    integrate_radial(ps, ex, 1.0, opts);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_blowup_within_budget);
  }
}

TEST_CASE("normalization rescales onto the unit ball") {
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  AsymptoticConstants ac = compute_constants(ex, ps);
  RadialSolution sol = solve_base(1.0);
  sol.R_hat = estimate_blowup_radius(sol, ac, ex);
  RadialSolution unit = normalize_to_unit(sol, ex);

  CHECK(unit.R_hat == 1.0);
  CHECK(unit.samples.back().r < 1.0);
  CHECK(unit.samples.back().r > 0.99);
  double scale = std::pow(sol.R_hat, ex.beta0);
  CHECK(unit.v0 == doctest::Approx(sol.v0 * scale).epsilon(1e-12));
  CHECK(unit.options.v_blowup_threshold ==
        doctest::Approx(sol.options.v_blowup_threshold * scale).epsilon(1e-12));
}

TEST_CASE("normalized profiles from different core values coincide") {
  // One scaling orbit: v0 and the blow-up radius trade off exactly, so after
  // rescaling onto the unit ball the two solutions sample the same curve.
  ParamSet ps = base_ps();
  DerivedExponents ex = derive_exponents(ps);
  AsymptoticConstants ac = compute_constants(ex, ps);

  auto unit_solution = [&](double v0) {
    RadialSolution sol = integrate_radial(ps, ex, v0, {});
    sol.R_hat = estimate_blowup_radius(sol, ac, ex);
    return normalize_to_unit(sol, ex);
  };
  RadialSolution u1 = unit_solution(1.0);
  RadialSolution u2 = unit_solution(2.0);

  std::vector<double> r1, v1;
  for (const auto& s : u1.samples) {
    r1.push_back(s.r);
    v1.push_back(s.v);
  }
  PchipInterpolant v_of_r(r1, v1);

  double worst = 0;
  for (const auto& s : u2.samples) {
    if (s.r < 0.2 || s.r > 0.99) continue;
    worst = std::max(worst, std::abs(v_of_r(s.r) - s.v) / s.v);
  }
  // Limited by the two independent radius estimates: near r = 0.99 their
  // relative error is amplified by beta0 / (1-r).
  CHECK(worst <= 3e-3);
}
