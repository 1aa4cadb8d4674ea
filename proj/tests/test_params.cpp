#include <doctest.h>

#include <cmath>

#include "blowup/errors.hpp"
#include "blowup/params.hpp"
#include "blowup/sampling.hpp"

using namespace blowup;

namespace {
DerivedExponents exps_of(double p, double N, double m, double q, double a,
                         double b) {
  return derive_exponents(validate_params(p, N, m, q, a, b));
}
}  // namespace

TEST_CASE("reference set: exponents") {
  DerivedExponents ex = exps_of(2, 3, 1, 2, 0, 0);
  CHECK(ex.delta == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ex.gamma == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ex.alpha0 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(ex.beta0 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(ex.gamma0 == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("reference set: constants 60/180/720") {
  ParamSet ps = validate_params(2, 3, 1, 2, 0, 0);
  DerivedExponents ex = derive_exponents(ps);
  AsymptoticConstants ac = compute_constants(ex, ps);
  CHECK(ac.lambda == doctest::Approx(60.0).epsilon(1e-10));
  CHECK(ac.mu == doctest::Approx(180.0).epsilon(1e-10));
  CHECK(ac.nu == doctest::Approx(720.0).epsilon(1e-10));
}

TEST_CASE("swapped couplings m=2,q=1: constants 720/60/180") {
  ParamSet ps = validate_params(2, 3, 2, 1, 0, 0);
  DerivedExponents ex = derive_exponents(ps);
  CHECK(ex.alpha0 == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(ex.beta0 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(ex.gamma0 == doctest::Approx(4.0).epsilon(1e-14));
  AsymptoticConstants ac = compute_constants(ex, ps);
  CHECK(ac.lambda == doctest::Approx(720.0).epsilon(1e-10));
  CHECK(ac.mu == doctest::Approx(60.0).epsilon(1e-10));
  CHECK(ac.nu == doctest::Approx(180.0).epsilon(1e-10));
  // the three relations, checked directly
  CHECK(ac.lambda * 5.0 == doctest::Approx(ac.mu * ac.mu).epsilon(1e-10));
  CHECK(ac.lambda == doctest::Approx(4.0 * ac.nu).epsilon(1e-10));
  CHECK(3.0 * ac.mu == doctest::Approx(ac.nu).epsilon(1e-10));
}

TEST_CASE("steep v-coupling q=6: fractional exponents") {
  DerivedExponents ex = exps_of(2, 3, 1, 6, 0, 0);
  CHECK(ex.delta == doctest::Approx(-5.0).epsilon(1e-14));
  CHECK(ex.alpha0 == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(ex.beta0 == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(ex.gamma0 == doctest::Approx(2.6).epsilon(1e-14));
}

TEST_CASE("domain rejections") {
  CHECK_THROWS_AS(validate_params(1, 3, 1, 2, 0, 0), Error);       // p = 1
  CHECK_THROWS_AS(validate_params(2, 3, 1, 2, 1, 0), Error);       // alpha = p-1
  CHECK_THROWS_AS(validate_params(2, 3, 1, 2, 0, 1.5), Error);     // beta > m
  CHECK_THROWS_AS(validate_params(2, 2.5, 1, 2, 0, 0), Error);     // N not integral
  CHECK_THROWS_AS(validate_params(2, 1, 1, 2, 0, 0), Error);       // N < 2
  CHECK_THROWS_AS(validate_params(2, 3, 0, 2, 0, 0), Error);       // m = 0
  CHECK_THROWS_AS(validate_params(2, 3, 1, 0, 0, 0), Error);       // q = 0
  CHECK_THROWS_AS(validate_params(2, 3, 1, 2, -0.1, 0), Error);    // alpha < 0
  double nan = std::nan("");
  CHECK_THROWS_AS(validate_params(nan, 3, 1, 2, 0, 0), Error);

  try {
    validate_params(2, 3, 1, 2, 1, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain_violation);
  }
}

TEST_CASE("degenerate coupling delta = 0") {
  try {
    validate_params(2, 3, 1, 1, 0, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::delta_zero);
    CHECK(std::string(e.what()).find("delta") != std::string::npos);
  }
}

TEST_CASE("regime classification on known sets") {
  ParamSet ps = validate_params(2, 3, 1, 2, 0, 0);
  Regime rg = classify_regime(derive_exponents(ps), ps);
  CHECK(rg.tag == RegimeTag::BlowupBoth);
  CHECK(rg.delta_threshold == doctest::Approx(-3.0).epsilon(1e-14));

  ps = validate_params(2, 3, 1, 6, 0, 0);
  rg = classify_regime(derive_exponents(ps), ps);
  CHECK(rg.tag == RegimeTag::BlowupVOnly);

  ps = validate_params(2, 3, 0.5, 1, 0, 0);
  DerivedExponents ex = derive_exponents(ps);
  CHECK(ex.delta == doctest::Approx(0.5).epsilon(1e-14));
  rg = classify_regime(ex, ps);
  CHECK(rg.tag == RegimeTag::GlobalBounded);
  CHECK_FALSE(in_blowup_regime(ex));
  CHECK_THROWS_AS(compute_constants(ex, ps), Error);
}

TEST_CASE("identities and relations over sampled blow-up sets") {
  ParamSampler sampler(0x9e3779b97f4a7c15ull);
  for (int i = 0; i < 500; ++i) {
    SampledParams sp = sampler.next_blowup();
    const DerivedExponents& ex = sp.exps;
    CHECK(ex.delta < 0);
    CHECK(ex.alpha0 > 0);
    CHECK(ex.beta0 > 0);
    CHECK(ex.gamma0 == doctest::Approx(ex.beta0 + 1).epsilon(1e-14));

    IdentityResiduals idr = exponent_identity_residuals(ex, sp.params);
    CHECK(std::abs(idr.a) <= 1e-12);
    CHECK(std::abs(idr.b) <= 1e-12);

    AsymptoticConstants ac = compute_constants(ex, sp.params);
    CHECK(ac.lambda > 0);
    CHECK(ac.mu > 0);
    CHECK(ac.nu == doctest::Approx(ex.beta0 * ac.mu).epsilon(1e-12));
    ConstantResiduals cr = constant_relation_residuals(ac, ex, sp.params);
    CHECK(cr.max_abs() <= 1e-10);
  }
}

TEST_CASE("regime partition matches the delta split exactly") {
  ParamSampler sampler(0xc0ffee11ull);
  for (int i = 0; i < 200; ++i) {
    SampledParams sp = sampler.next_blowup_side(i % 2 == 0);
    Regime rg = classify_regime(sp.exps, sp.params);
    if (sp.exps.delta < rg.delta_threshold) {
      CHECK(rg.tag == RegimeTag::BlowupVOnly);
      CHECK(sp.exps.alpha0 < 1);
    } else {
      CHECK(rg.tag == RegimeTag::BlowupBoth);
      CHECK(sp.exps.alpha0 >= 1);
    }
  }
}
