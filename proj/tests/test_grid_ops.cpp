#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rbslip/grid.hpp"
#include "rbslip/operators.hpp"
#include "rbslip/verify.hpp"

using namespace rbslip;
using std::numbers::pi;

namespace {

HeightProfile flat(double gamma = 1.0) {
  HeightProfile p;
  p.gamma = gamma;
  return p;
}

double max_diff(const ScalarField& a, const ScalarField& b, int j0, int j1) {
  double e = 0.0;
  for (int j = j0; j < j1; ++j)
    for (int i = 0; i < a.n1; ++i) e = std::max(e, std::abs(a(i, j) - b(i, j)));
  return e;
}

}  // namespace

TEST_CASE("metric coefficients") {
  const MappedGrid g(rough_fixture(), 32, 17);
  for (int i = 0; i < g.n1; ++i) {
    CHECK(g.a22[i] - g.a12[i] * g.a12[i] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.a12[i] == -g.hp[i]);
  }
  const MappedGrid f(flat(), 16, 9);
  for (int i = 0; i < f.n1; ++i) CHECK(f.a22[i] == 1.0);
  CHECK(fft_friendly(2 * 3 * 5 * 7 * 8));
  CHECK_FALSE(fft_friendly(11 * 4));
}

TEST_CASE("grad_physical oracles") {
  const MappedGrid g(flat(), 32, 17);
  const ScalarField f = sample_flat(g, [](double x1, double) { return std::sin(2 * pi * x1); });
  const VectorField gr = grad_physical(f, g);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      CHECK(gr.c1(i, j) == doctest::Approx(2 * pi * std::cos(2 * pi * g.x1[i])).epsilon(1e-12));
      CHECK(std::abs(gr.c2(i, j)) < 1e-13);
    }
  // f = x2 = y2 - h(y1): grad = (-h', 1)
  const MappedGrid r(rough_fixture(), 32, 17);
  const VectorField gx = grad_physical(sample_flat(r, [](double, double x2) { return x2; }), r);
  for (int j = 0; j < r.n2; ++j)
    for (int i = 0; i < r.n1; ++i) {
      CHECK(gx.c1(i, j) == doctest::Approx(-r.hp[i]).epsilon(1e-12));
      CHECK(gx.c2(i, j) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("apply_L_tilde flat eigenfunction and constants") {
  const MappedGrid g(flat(), 32, 65);
  const ScalarField f = sample_flat(g, [](double x1, double x2) { return std::sin(2 * pi * x1) * std::sin(pi * x2); });
  const ScalarField L = apply_L_tilde(f, g);
  double err = 0.0;
  for (int j = 1; j < g.n2 - 1; ++j)
    for (int i = 0; i < g.n1; ++i) err = std::max(err, std::abs(L(i, j) + 5 * pi * pi * f(i, j)));
  CHECK(err < 5 * pi * pi * pi * pi * g.dx2 * g.dx2 / 12 * 1.01);

  const MappedGrid r(rough_fixture(), 32, 33);
  const ScalarField c(r, 3.7);
  CHECK(max_abs(apply_L_tilde(c, r)) < 1e-11);
}

TEST_CASE("flat metric reduces to the spectral plus 3-point Laplacian") {
  const MappedGrid g(flat(2.0), 32, 33);
  const ScalarField f = sample_flat(g, [](double x1, double x2) {
    return std::cos(pi * x1) * std::exp(x2) + std::sin(2 * pi * x1) * x2 * x2 * x2;
  });
  const ScalarField dd = d1(d1(f, g), g);
  ScalarField ref(g);
  for (int j = 1; j < g.n2 - 1; ++j)
    for (int i = 0; i < g.n1; ++i)
      ref(i, j) = dd(i, j) + (f(i, j + 1) - 2 * f(i, j) + f(i, j - 1)) / (g.dx2 * g.dx2);
  CHECK(max_diff(apply_L_tilde(f, g), ref, 1, g.n2 - 1) < 1e-13 * max_abs(ref));
}

TEST_CASE("property: adjointness of the mapped operator") {
  const MappedGrid g(rough_fixture(), 32, 33);
  auto bump = [&](double a, double b) {
    return sample_flat(g, [=](double x1, double x2) { return std::sin(pi * x2) * (a + std::cos(2 * pi * x1 + b)) * x2; });
  };
  ScalarField f = bump(0.3, 0.1), h = bump(-0.2, 1.3);
  for (int i = 0; i < g.n1; ++i) f(i, 0) = f(i, g.n2 - 1) = h(i, 0) = h(i, g.n2 - 1) = 0.0;
  const double lhs = volume_integral(f, apply_L_tilde(h, g), g);
  const double rhs = volume_integral(apply_L_tilde(f, g), h, g);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
}

TEST_CASE("boundary traces") {
  const MappedGrid g(flat(), 16, 17);
  const ScalarField x2 = sample_flat(g, [](double, double x) { return x; });
  for (double v : boundary_trace(x2, g, Side::bottom, TraceKind::normal_derivative)) CHECK(v == doctest::Approx(-1.0));
  for (double v : boundary_trace(x2, g, Side::top, TraceKind::normal_derivative)) CHECK(v == doctest::Approx(1.0));
  const MappedGrid r(rough_fixture(), 32, 17);
  for (double v : boundary_trace(ScalarField(r, 5.0), r, Side::top, TraceKind::tangential_derivative))
    CHECK(std::abs(v) < 1e-12);
  const ScalarField y2 = sample_physical(r, [](double, double y) { return y; });
  const auto nd = boundary_trace(y2, r, Side::bottom, TraceKind::normal_derivative);
  for (int i = 0; i < r.n1; ++i) CHECK(nd[i] == doctest::Approx(-1.0 / r.s[i]).epsilon(1e-12));
  const auto v = boundary_trace(y2, r, Side::top, TraceKind::value);
  for (int i = 0; i < r.n1; ++i) CHECK(v[i] == doctest::Approx(1.0 + r.h[i]).epsilon(1e-14));
}

TEST_CASE("line integrals") {
  const MappedGrid g(flat(), 16, 9);
  CHECK(line_integral(std::vector<double>(16, 1.0), g) == doctest::Approx(1.0).epsilon(1e-15));
  const MappedGrid r(rough_fixture(), 256, 9);
  // oracle: adaptive-free high-resolution midpoint sum of sqrt(1 + 0.04 pi^2 cos^2)
  double oracle = 0.0;
  const int m = 200000;
  for (int k = 0; k < m; ++k) {
    const double c = std::cos(2 * pi * (k + 0.5) / m);
    oracle += std::sqrt(1 + 0.04 * pi * pi * c * c) / m;
  }
  CHECK(line_integral(std::vector<double>(256, 1.0), r) == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(oracle == doctest::Approx(1.0923835473311776).epsilon(1e-9));  // (2/pi) sqrt(1+a) E(a/(1+a)), a = 0.04 pi^2
  std::vector<double> kap(256);
  for (int i = 0; i < 256; ++i) kap[i] = curvature(rough_fixture(), r.x1[i], Side::bottom);
  CHECK(std::abs(line_integral(kap, r)) < 1e-12);
}

TEST_CASE("strip and volume integrals") {
  const MappedGrid g(rough_fixture(), 32, 33);
  CHECK(volume_integral(ScalarField(g, 1.0), g) == doctest::Approx(1.0).epsilon(1e-14));
  const ScalarField x2 = sample_flat(g, [](double, double x) { return x; });
  CHECK(strip_integral(x2, g, 0.0, 0.25) == doctest::Approx(0.03125).epsilon(1e-13));
  CHECK(strip_integral(x2, g, 0.1, 0.3) == doctest::Approx(0.04).epsilon(1e-13));
  const auto lv = level_values(x2, g, 0.37);
  CHECK(lv[5] == doctest::Approx(0.37).epsilon(1e-14));
  CHECK_THROWS(level_values(x2, g, 1.5));
}

TEST_CASE("MMS orders on the rough fixture") {
  for (const MmsStudy& m : mms_study(rough_fixture(), {32, 64, 128}, 64)) {
    INFO(m.op);
    CHECK(m.min_order >= 1.9);
  }
}
