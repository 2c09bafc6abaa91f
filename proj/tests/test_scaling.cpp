#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rbslip/scaling.hpp"

using namespace rbslip;

TEST_CASE("unit setup is Ra = Pr = 1") {
  const Nondimensional n = nondimensionalize(DimensionalSetup{});
  CHECK(n.ra == 1.0);
  CHECK(n.pr == 1.0);
}

TEST_CASE("doubling the gap multiplies Ra by 8") {
  DimensionalSetup a, b;
  b.height_gap = 2.0;
  CHECK(nondimensionalize(b).ra / nondimensionalize(a).ra == doctest::Approx(8.0));
  CHECK(nondimensionalize(b).pr == nondimensionalize(a).pr);
}

TEST_CASE("water-like numbers") {
  DimensionalSetup s;
  s.viscosity = 1e-2;
  s.thermal_diffusivity = 1e-3;
  s.expansion_coeff = 1.0;
  s.gravity = 1.0;
  s.temp_gap = 1.0;
  s.height_gap = 1.0;
  const Nondimensional n = nondimensionalize(s);
  CHECK(n.ra == doctest::Approx(1e5));
  CHECK(n.pr == doctest::Approx(10.0));
}

TEST_CASE("invalid setups are rejected by name") {
  DimensionalSetup s;
  s.viscosity = 0.0;
  try {
    (void)nondimensionalize(s);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("viscosity") != std::string::npos);
  }
  s = {};
  s.height_gap = -1.0;
  CHECK_THROWS_AS((void)nondimensionalize(s), std::invalid_argument);
}

TEST_CASE("height ratio for a target exponent") {
  CHECK(ratio_for_target_exponent(0.5, 4.0) == doctest::Approx(4.0));
  CHECK(ratio_for_target_exponent(1.5, 8.0) == doctest::Approx(std::pow(8.0, -0.6)));
  CHECK(ratio_for_target_exponent(0.0, 8.0) == 1.0);
  CHECK_THROWS_AS(ratio_for_target_exponent(2.0 / 3.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(ratio_for_target_exponent(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("round trip: the curvature ratio follows Ra_ratio^rho") {
  for (double rho : {0.0, 0.25, 0.5, 1.5}) {
    for (double tr : {2.0, 8.0, 0.25}) {
      for (double h1 : {100.0, 1000.0}) {
        DimensionalSetup s1, s2;
        s1.height_gap = h1;
        s2.temp_gap = tr;
        s2.height_gap = h1 * ratio_for_target_exponent(rho, tr);
        if (s2.height_gap < 100.0) continue;
        const CurvatureScaling c = curvature_scaling(s1, s2);
        const double target = std::pow(c.ra_ratio, rho);
        CHECK(c.kappa_ratio_leading == doctest::Approx(target).epsilon(1e-10));
        CHECK(std::abs(c.kappa_ratio_exact / target - 1.0) <= 0.1);
      }
    }
  }
}

TEST_CASE("ratios compose multiplicatively") {
  DimensionalSetup a, b, c;
  a.height_gap = 100;
  b.height_gap = 300;
  b.temp_gap = 2;
  c.height_gap = 700;
  c.temp_gap = 5;
  const CurvatureScaling ab = curvature_scaling(a, b), bc = curvature_scaling(b, c), ac = curvature_scaling(a, c);
  CHECK(ab.ra_ratio * bc.ra_ratio == doctest::Approx(ac.ra_ratio));
  CHECK(ab.kappa_ratio_leading * bc.kappa_ratio_leading == doctest::Approx(ac.kappa_ratio_leading));
  CHECK(ab.kappa_ratio_exact * bc.kappa_ratio_exact == doctest::Approx(ac.kappa_ratio_exact));
}

TEST_CASE("report lists both setups and flags the pole") {
  DimensionalSetup a, b;
  b.temp_gap = 2.0;
  const std::string r = scaling_report(a, b, 2.0 / 3.0);
  CHECK(r.find("ra_ratio = ") != std::string::npos);
  CHECK(r.find("undefined") != std::string::npos);
}
