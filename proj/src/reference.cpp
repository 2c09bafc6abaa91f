#include "rbslip/reference.hpp"

#include <cmath>
#include <numbers>

namespace rbslip::reference {

ScalarField d1(const ScalarField& f, const MappedGrid& g) {
  const int n = g.n1;
  const int kmax = (n - 1) / 2;  // drops Nyquist for even n
  const double w0 = 2.0 * std::numbers::pi / g.gamma;
  ScalarField out(g.n1, g.n2, 0.0, f.bc);
  std::vector<double> c(n), s(n);
  for (int j = 0; j < g.n2; ++j) {
    for (int k = 1; k <= kmax; ++k) {
      double a = 0.0, b = 0.0;
      for (int i = 0; i < n; ++i) {
        const double ph = 2.0 * std::numbers::pi * k * i / n;
        a += f(i, j) * std::cos(ph);
        b += f(i, j) * std::sin(ph);
      }
      a *= 2.0 / n;
      b *= 2.0 / n;
      for (int i = 0; i < n; ++i) {
        const double ph = 2.0 * std::numbers::pi * k * i / n;
        out(i, j) += w0 * k * (b * std::cos(ph) - a * std::sin(ph));
      }
    }
  }
  return out;
}

ScalarField d2(const ScalarField& f, const MappedGrid& g) {
  ScalarField out(g.n1, g.n2, 0.0, f.bc);
  const int n2 = g.n2;
  const double dx = g.dx2;
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      if (j == 0) out(i, j) = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * dx);
      else if (j == n2 - 1) out(i, j) = (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2)) / (2.0 * dx);
      else out(i, j) = (f(i, j + 1) - f(i, j - 1)) / (2.0 * dx);
    }
  return out;
}

ScalarField apply_L_tilde(const ScalarField& f, const MappedGrid& g) {
  const int n1 = g.n1, n2 = g.n2;
  const double dx = g.dx2;
  const ScalarField a = d1(f, g);
  // x1 flux on nodes, then its x1 derivative
  ScalarField flux1(g);
  for (int j = 1; j < n2 - 1; ++j)
    for (int i = 0; i < n1; ++i) flux1(i, j) = a(i, j) - g.hp[i] * (f(i, j + 1) - f(i, j - 1)) / (2.0 * dx);
  const ScalarField div1 = d1(flux1, g);
  ScalarField out(g.n1, g.n2, 0.0, f.bc);
  for (int j = 1; j < n2 - 1; ++j)
    for (int i = 0; i < n1; ++i) {
      auto edge = [&](int e) {
        return g.a22[i] * (f(i, e + 1) - f(i, e)) / dx - g.hp[i] * 0.5 * (a(i, e) + a(i, e + 1));
      };
      out(i, j) = div1(i, j) + (edge(j) - edge(j - 1)) / dx;
    }
  return out;
}

double volume_integral(const ScalarField& a, const ScalarField& b, const MappedGrid& g) {
  double total = 0.0;
  for (int j = 0; j < g.n2; ++j) {
    double row = 0.0;
    for (int i = 0; i < g.n1; ++i) row += a(i, j) * b(i, j);
    total += row * g.w2[j];
  }
  return total * g.dx1;
}

ScalarField advection_skew(const ScalarField& psi, const ScalarField& q, const MappedGrid& g) {
  ScalarField v1 = d2(psi, g);
  for (double& v : v1.values) v = -v;
  const ScalarField v2 = d1(psi, g);
  ScalarField f1(g), f2(g);
  for (std::size_t n = 0; n < f1.values.size(); ++n) {
    f1.values[n] = v1.values[n] * q.values[n];
    f2.values[n] = v2.values[n] * q.values[n];
  }
  const ScalarField q1 = d1(q, g), q2 = d2(q, g), c1 = d1(f1, g), c2 = d2(f2, g);
  ScalarField out(g);
  for (int j = 1; j < g.n2 - 1; ++j)
    for (int i = 0; i < g.n1; ++i)
      out(i, j) = 0.5 * (c1(i, j) + c2(i, j) + v1(i, j) * q1(i, j) + v2(i, j) * q2(i, j));
  return out;
}

}  // namespace rbslip::reference
