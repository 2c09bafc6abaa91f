#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rbslip/geometry.hpp"

using namespace rbslip;
using std::numbers::pi;

namespace {

HeightProfile sine_profile() {
  HeightProfile p;
  p.gamma = 1.0;
  p.modes = {{1, 0.0, 0.1}};
  return p;
}

BoundaryData constant_wall(Side side, int n, double alpha, double kappa) {
  BoundaryData b;
  b.side = side;
  for (int i = 0; i < n; ++i) {
    b.y1.push_back(double(i) / n);
    b.alpha.push_back(alpha);
    b.alpha_dot.push_back(0.0);
    b.kappa.push_back(kappa);
    b.kappa_dot.push_back(0.0);
    b.normal.push_back({0.0, side == Side::top ? 1.0 : -1.0});
    b.tangent.push_back({side == Side::top ? -1.0 : 1.0, 0.0});
    b.ds_weight.push_back(1.0);
  }
  b.alpha_min = alpha;
  return b;
}

}  // namespace

TEST_CASE("height derivatives match the symbolic sine series") {
  const HeightProfile p = sine_profile();
  CHECK(evaluate_height(p, 0.25, 2) == doctest::Approx(-0.1 * 4 * pi * pi).epsilon(1e-14));
  CHECK(evaluate_height(p, 0.0, 1) == doctest::Approx(0.2 * pi).epsilon(1e-14));
  CHECK(evaluate_height(p, 0.1, 3) == doctest::Approx(-0.1 * std::pow(2 * pi, 3) * std::cos(0.2 * pi)).epsilon(1e-13));
  HeightProfile flat;
  flat.mean_offset = 0.3;
  for (int k = 0; k <= 3; ++k) CHECK(evaluate_height(flat, 0.7, k) == (k == 0 ? 0.3 : 0.0));
  CHECK_THROWS(evaluate_height(p, 0.1, 4));
  CHECK_THROWS(evaluate_height(p, 0.1, -1));
}

TEST_CASE("curvature sign convention") {
  const HeightProfile p = sine_profile();
  CHECK(curvature(p, 0.25, Side::bottom) == doctest::Approx(0.4 * pi * pi).epsilon(1e-13));
  for (double y : {0.0, 0.13, 0.5, 0.77}) CHECK(curvature(p, y, Side::top) == -curvature(p, y, Side::bottom));
  HeightProfile flat;
  CHECK(curvature(flat, 0.3, Side::bottom) == 0.0);
}

TEST_CASE("boundary frames: flat wall") {
  HeightProfile flat;
  flat.gamma = 2.0;
  const auto [b, t] = boundary_frames(flat, 16, FourierSeries{2.0, 1.0, {}});
  CHECK(b.normal[3][0] == doctest::Approx(0.0));
  CHECK(b.normal[3][1] == -1.0);
  // tangent is the normal rotated by +90 degrees
  CHECK(b.tangent[3][0] == 1.0);
  CHECK(b.tangent[3][1] == doctest::Approx(0.0));
  CHECK(t.normal[3][1] == 1.0);
  CHECK(b.ds_weight[3] == 1.0);
  CHECK(b.kappa[3] == 0.0);
}

TEST_CASE("boundary frames: sine wall") {
  const auto [b, t] = boundary_frames(sine_profile(), 64, FourierSeries{1.0, 1.0, {}});
  CHECK(b.ds_weight[0] == doctest::Approx(std::sqrt(1 + 0.04 * pi * pi)).epsilon(1e-14));
  CHECK(b.ds_weight[0] == doctest::Approx(1.1810).epsilon(1e-4));
  double integral = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double hp = evaluate_height(sine_profile(), b.y1[i], 1), s = std::sqrt(1 + hp * hp);
    CHECK(t.normal[i][0] == doctest::Approx(-hp / s).epsilon(1e-14));
    CHECK(t.normal[i][1] == doctest::Approx(1 / s).epsilon(1e-14));
    CHECK(b.normal[i][0] == doctest::Approx(hp / s).epsilon(1e-14));
    CHECK(std::abs(std::hypot(b.normal[i][0], b.normal[i][1]) - 1) <= 1e-14);
    CHECK(std::abs(b.tangent[i][0] * b.normal[i][0] + b.tangent[i][1] * b.normal[i][1]) <= 1e-14);
    CHECK(t.kappa[i] == -b.kappa[i]);
    integral += b.kappa[i] * b.ds_weight[i] / 64;
  }
  CHECK(std::abs(integral) <= 1e-12);
}

TEST_CASE("alpha sampling and rejection") {
  const HeightProfile flat;
  const auto [b, t] = boundary_frames(flat, 64, FourierSeries{1.0, 1.0, {{1, 0.5, 0.0}}});
  CHECK(b.alpha_min == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS(boundary_frames(flat, 64, FourierSeries{1.0, 0.2, {{1, 0.5, 0.0}}}));
  // alpha_dot is the arc-length derivative
  const auto [b2, t2] = boundary_frames(sine_profile(), 8, FourierSeries{1.0, 1.0, {{1, 0.0, 0.5}}});
  const double s0 = b2.ds_weight[0];
  CHECK(b2.alpha_dot[0] == doctest::Approx(0.5 * 2 * pi / s0).epsilon(1e-13));
}

TEST_CASE("condition ec arithmetic") {
  HeightProfile flat;
  const auto [b, t] = boundary_frames(flat, 32, FourierSeries{1.0, 1.0, {}});
  const ConditionReport r = check_condition_ec(b, t);
  CHECK(r.pass);
  CHECK(r.worst_margin == doctest::Approx(2.25).epsilon(1e-14));

  const BoundaryData lb = constant_wall(Side::bottom, 8, 0.04, 0.2), lt = constant_wall(Side::top, 8, 0.04, -0.2);
  const ConditionReport f = check_condition_ec(lb, lt);
  CHECK_FALSE(f.pass);
  CHECK(f.worst_margin == doctest::Approx(0.13 - 0.2).epsilon(1e-12));
  CHECK(f.n_failed == 16);
}

TEST_CASE("theorem-2 conditions and norms") {
  const BoundaryData b = constant_wall(Side::bottom, 8, 0.01, 0.03), t = constant_wall(Side::top, 8, 0.01, -0.03);
  CHECK_FALSE(check_condition_theorem2(b, t, KappaVariant::kappa_leq_alpha).pass);
  const ConditionReport g = check_condition_theorem2(b, t, KappaVariant::general);
  CHECK(g.pass);
  CHECK(g.worst_margin == doctest::Approx(0.045 - 0.03).epsilon(1e-12));

  HeightProfile flat;
  const auto [fb, ft] = boundary_frames(flat, 1024, FourierSeries{1.0, 0.1, {{1, 0.05, 0.0}}});
  const ConditionReport n = check_condition_theorem2(fb, ft, KappaVariant::kappa_leq_alpha);
  CHECK(n.alpha_plus_kappa_inf == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(n.alpha_plus_kappa_w1inf == doctest::Approx(0.1 * pi).epsilon(1e-12));

  const auto [ub, ut] = boundary_frames(flat, 16, FourierSeries{1.0, 1.0, {}});
  const ConditionReport u = check_condition_theorem2(ub, ut, KappaVariant::kappa_leq_alpha);
  CHECK(u.pass);
  CHECK(u.alpha_plus_kappa_inf == 1.0);
}

TEST_CASE("property: norms converge under n1 doubling for band-limited data") {
  HeightProfile p;
  p.gamma = 2.0;
  p.modes = {{1, 0.05, 0.02}, {3, 0.0, 0.01}};
  const FourierSeries a{2.0, 1.0, {{2, 0.2, 0.1}}};
  auto norm_at = [&](int n) {
    const auto [b, t] = boundary_frames(p, n, a);
    return check_condition_theorem2(b, t, KappaVariant::general).alpha_plus_kappa_inf;
  };
  // sampled maxima converge like dx^2
  const double ref = norm_at(65536);
  const double e1 = std::abs(norm_at(1024) - ref), e2 = std::abs(norm_at(4096) - ref);
  CHECK(e1 < 1e-4);
  CHECK(e2 < 1e-5);
  CHECK(e2 <= e1);
  CHECK(height_range(p, 4096) > 0.0);
}

TEST_CASE("property: random profiles keep the frame identities") {
  std::uint64_t state = 12345;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return double(state >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 20; ++trial) {
    HeightProfile p;
    p.gamma = 0.5 + 2 * next();
    for (int k = 1; k <= 3; ++k) p.modes.push_back({k, 0.05 * (next() - 0.5), 0.05 * (next() - 0.5)});
    const auto [b, t] = boundary_frames(p, 128, FourierSeries{p.gamma, 1.0, {}});
    double integral = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(std::abs(std::hypot(t.normal[i][0], t.normal[i][1]) - 1) <= 1e-14);
      CHECK(t.kappa[i] == -b.kappa[i]);
      integral += b.kappa[i] * b.ds_weight[i] * p.gamma / 128;
    }
    CHECK(std::abs(integral) <= 1e-12);
  }
}
