#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rbslip/elliptic.hpp"
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

}  // namespace

TEST_CASE("flat Dirichlet: eigenfunction and harmonic linear") {
  const MappedGrid g(flat(), 32, 65);
  const EllipticSolver es(g);
  const ScalarField exact = sample_flat(g, [](double x1, double x2) { return std::sin(2 * pi * x1) * std::sin(pi * x2); });
  ScalarField rhs = exact;
  for (double& v : rhs.values) v *= -5 * pi * pi;
  const ScalarField u = es.solve_poisson_dirichlet(rhs, std::vector<double>(32, 0.0), std::vector<double>(32, 0.0));
  double err = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) err = std::max(err, std::abs(u.values[k] - exact.values[k]));
  CHECK(err < 1e-3);

  const ScalarField lin = es.solve_poisson_dirichlet(ScalarField(g), std::vector<double>(32, 0.0), std::vector<double>(32, 1.0));
  for (int j = 0; j < g.n2; ++j) CHECK(lin(7, j) == doctest::Approx(g.x2[j]).epsilon(1e-12));
}

TEST_CASE("rough Dirichlet: solve then apply reproduces the rhs") {
  const MappedGrid g(rough_fixture(), 32, 33);
  // tight tolerance: the default 1e-10 is relative to the wall-lifted rhs, which is O(1/dx2^2) larger
  const EllipticSolver es(g, EllipticOptions{1e-13, 0});
  const ScalarField rhs = sample_flat(g, [](double x1, double x2) { return std::cos(2 * pi * x1) * x2 + 1.0; });
  SolveStats st;
  const ScalarField u = es.solve_poisson_dirichlet(rhs, std::vector<double>(32, 0.3), std::vector<double>(32, -0.2),
                                                   nullptr, &st);
  const ScalarField back = apply_L_tilde(u, g);
  double err = 0.0;
  for (int j = 1; j < g.n2 - 1; ++j)
    for (int i = 0; i < g.n1; ++i) err = std::max(err, std::abs(back(i, j) - rhs(i, j)));
  CHECK(err <= 1e-8 * max_abs(rhs));
  CHECK(st.relative_residual <= 1e-13);
  CHECK(u(3, 0) == 0.3);
  CHECK(u(3, g.n2 - 1) == -0.2);
}

TEST_CASE("non-convergence is reported") {
  const MappedGrid g(rough_fixture(), 32, 33);
  EllipticOptions opt;
  opt.max_iterations = 1;
  const EllipticSolver es(g, opt);
  const ScalarField rhs = sample_flat(g, [](double x1, double x2) { return std::cos(4 * pi * x1) * x2 * x2; });
  CHECK_THROWS_AS(es.solve_poisson_dirichlet(rhs, std::vector<double>(32, 0.0), std::vector<double>(32, 1.0)), SolverError);
}

TEST_CASE("Neumann solves") {
  const MappedGrid g(flat(), 32, 33);
  const EllipticSolver es(g);
  const std::vector<double> zero(32, 0.0);
  CHECK(max_abs(es.solve_poisson_neumann(ScalarField(g), zero, zero)) < 1e-14);

  // cos(2 pi x1) with zero flux: p = -cos(2 pi x1) / (2 pi)^2, uniform in x2
  const ScalarField rhs = sample_flat(g, [](double x1, double) { return std::cos(2 * pi * x1); });
  const ScalarField p = es.solve_poisson_neumann(rhs, zero, zero);
  for (int j = 0; j < g.n2; j += 8)
    for (int i = 0; i < g.n1; i += 5)
      CHECK(p(i, j) == doctest::Approx(-std::cos(2 * pi * g.x1[i]) / (4 * pi * pi)).epsilon(1e-8));
}

TEST_CASE("property: Neumann solutions have zero mean and report the defect") {
  const MappedGrid g(rough_fixture(), 32, 33);
  const EllipticSolver es(g);
  for (double shift : {0.0, 0.5, -2.0}) {
    const ScalarField rhs = sample_flat(g, [=](double x1, double x2) { return std::sin(2 * pi * x1) * x2 + shift; });
    std::vector<double> nb(32), nt(32);
    for (int i = 0; i < 32; ++i) {
      nb[i] = 0.1 * std::cos(2 * pi * g.x1[i]);
      nt[i] = 0.2;
    }
    SolveStats st;
    const ScalarField p = es.solve_poisson_neumann(rhs, nb, nt, &st);
    CHECK(std::abs(volume_integral(p, g)) < 1e-12);
    if (shift != 0.0) CHECK(std::abs(st.compatibility_defect) > 0.0);
  }
}

TEST_CASE("property: Helmholtz solve is symmetric positive") {
  const MappedGrid g(rough_fixture(), 16, 17);
  const EllipticSolver es(g);
  const ScalarField rhs = sample_flat(g, [](double x1, double x2) { return 1.0 + std::sin(2 * pi * x1) * x2; });
  const std::vector<double> zero(16, 0.0);
  const ScalarField u = es.solve_helmholtz(50.0, rhs, zero, zero);
  // sigma u - L u = rhs at interior rows
  const ScalarField Lu = apply_L_tilde(u, g);
  double err = 0.0;
  for (int j = 1; j < g.n2 - 1; ++j)
    for (int i = 0; i < g.n1; ++i) err = std::max(err, std::abs(50.0 * u(i, j) - Lu(i, j) - rhs(i, j)));
  CHECK(err < 1e-8);
}
