#include "rbslip/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbslip {

ScalarField d1(const ScalarField& f, const MappedGrid& g) {
  ScalarField out(g.n1, g.n2, 0.0, f.bc);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.n2; ++j) g.fft->derivative(f.row(j), out.row(j));
  return out;
}

namespace {

inline double d2_at(const ScalarField& f, int i, int j, int n2, double dx) {
  if (j == 0) return (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * dx);
  if (j == n2 - 1) return (3.0 * f(i, n2 - 1) - 4.0 * f(i, n2 - 2) + f(i, n2 - 3)) / (2.0 * dx);
  return (f(i, j + 1) - f(i, j - 1)) / (2.0 * dx);
}

void apply_core(const ScalarField& f, const MappedGrid& g, ScalarField& out, bool neumann,
                const std::vector<double>* fb, const std::vector<double>* ft) {
  const int n1 = g.n1, n2 = g.n2;
  const double dx = g.dx2;
  const ScalarField a = d1(f, g);
  std::vector<double> f2(static_cast<std::size_t>(n2 - 1) * n1);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < n2 - 1; ++e) {
    for (int i = 0; i < n1; ++i) {
      const double delta = (f(i, e + 1) - f(i, e)) / dx;
      const double avg = 0.5 * (a(i, e) + a(i, e + 1));
      f2[static_cast<std::size_t>(e) * n1 + i] = g.a22[i] * delta - g.hp[i] * avg;
    }
  }
  const int jlo = neumann ? 0 : 1;
  const int jhi = neumann ? n2 - 1 : n2 - 2;
#pragma omp parallel for schedule(static)
  for (int j = jlo; j <= jhi; ++j) {
    std::vector<double> f1(n1);
    for (int i = 0; i < n1; ++i) {
      double gj;
      if (j == 0) gj = (f(i, 1) - f(i, 0)) / dx;
      else if (j == n2 - 1) gj = (f(i, n2 - 1) - f(i, n2 - 2)) / dx;
      else gj = (f(i, j + 1) - f(i, j - 1)) / (2.0 * dx);
      f1[i] = a(i, j) - g.hp[i] * gj;
    }
    g.fft->derivative(f1.data(), f1.data());
    const double w = (j == 0 || j == n2 - 1) ? 0.5 * dx : dx;
    for (int i = 0; i < n1; ++i) {
      const double lower = j == 0 ? (fb ? (*fb)[i] : 0.0) : f2[static_cast<std::size_t>(j - 1) * n1 + i];
      const double upper = j == n2 - 1 ? (ft ? (*ft)[i] : 0.0) : f2[static_cast<std::size_t>(j) * n1 + i];
      out(i, j) = f1[i] + (upper - lower) / w;
    }
  }
}

}  // namespace

ScalarField d2(const ScalarField& f, const MappedGrid& g) {
  ScalarField out(g.n1, g.n2, 0.0, f.bc);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) out(i, j) = d2_at(f, i, j, g.n2, g.dx2);
  return out;
}

VectorField grad_physical(const ScalarField& f, const MappedGrid& g) {
  VectorField v{d1(f, g), d2(f, g)};
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) v.c1(i, j) -= g.hp[i] * v.c2(i, j);
  return v;
}

ScalarField apply_L_tilde(const ScalarField& f, const MappedGrid& g) {
  ScalarField out(g.n1, g.n2, 0.0, f.bc);
  apply_core(f, g, out, false, nullptr, nullptr);
  return out;
}

ScalarField apply_L_tilde_neumann(const ScalarField& f, const MappedGrid& g, const std::vector<double>* flux_bottom,
                                  const std::vector<double>* flux_top) {
  ScalarField out(g.n1, g.n2, 0.0, BcKind::neumann_given);
  apply_core(f, g, out, true, flux_bottom, flux_top);
  return out;
}

std::vector<double> conormal_flux(const ScalarField& f, const MappedGrid& g, int j) {
  std::vector<double> r = f.row_copy(j);
  g.fft->derivative(r.data(), r.data());
  std::vector<double> out(g.n1);
  for (int i = 0; i < g.n1; ++i) out[i] = g.a22[i] * d2_at(f, i, j, g.n2, g.dx2) - g.hp[i] * r[i];
  return out;
}

std::vector<double> boundary_trace(const ScalarField& f, const MappedGrid& g, Side side, TraceKind kind) {
  const int j = side == Side::bottom ? 0 : g.n2 - 1;
  const double sign = side == Side::bottom ? -1.0 : 1.0;
  switch (kind) {
    case TraceKind::value:
      return f.row_copy(j);
    case TraceKind::normal_derivative: {
      std::vector<double> fl = conormal_flux(f, g, j);
      for (int i = 0; i < g.n1; ++i) fl[i] *= sign / g.s[i];
      return fl;
    }
    case TraceKind::tangential_derivative: {
      std::vector<double> r = f.row_copy(j);
      g.fft->derivative(r.data(), r.data());
      for (int i = 0; i < g.n1; ++i) r[i] *= -sign / g.s[i];
      return r;
    }
  }
  throw std::invalid_argument("boundary_trace: unknown kind");
}

double line_integral(const std::vector<double>& integrand, const MappedGrid& g) {
  if (static_cast<int>(integrand.size()) != g.n1) throw std::invalid_argument("line_integral: length mismatch");
  double sum = 0.0;
  for (int i = 0; i < g.n1; ++i) sum += integrand[i] * g.s[i];
  return sum * g.dx1;
}

double column_integral(const std::vector<double>& v, const MappedGrid& g) {
  if (static_cast<int>(v.size()) != g.n1) throw std::invalid_argument("column_integral: length mismatch");
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum * g.dx1;
}

namespace {

// Row sums are formed independently and added in row order so the result does not
// depend on the thread count.
template <class F>
double weighted_rows(const MappedGrid& g, F&& term) {
  std::vector<double> rows(g.n2);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.n2; ++j) {
    double s = 0.0;
    for (int i = 0; i < g.n1; ++i) s += term(i, j);
    rows[j] = s * g.w2[j];
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total * g.dx1;
}

}  // namespace

double volume_integral(const ScalarField& f, const MappedGrid& g) {
  return weighted_rows(g, [&](int i, int j) { return f(i, j); });
}

double volume_integral(const ScalarField& a, const ScalarField& b, const MappedGrid& g) {
  return weighted_rows(g, [&](int i, int j) { return a(i, j) * b(i, j); });
}

double strip_integral(const ScalarField& f, const MappedGrid& g, double lo, double hi) {
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  if (hi <= lo) return 0.0;
  double total = 0.0;
  for (int e = 0; e < g.n2 - 1; ++e) {
    const double xa = g.x2[e], xb = g.x2[e + 1];
    const double a = std::max(lo, xa), b = std::min(hi, xb);
    if (b <= a) continue;
    const double ta = (a - xa) / (xb - xa), tb = (b - xa) / (xb - xa);
    double s = 0.0;
    for (int i = 0; i < g.n1; ++i) {
      const double fa = f(i, e) + ta * (f(i, e + 1) - f(i, e));
      const double fb = f(i, e) + tb * (f(i, e + 1) - f(i, e));
      s += 0.5 * (fa + fb);
    }
    total += s * (b - a);
  }
  return total * g.dx1;
}

std::vector<double> level_values(const ScalarField& f, const MappedGrid& g, double x2) {
  if (x2 < 0.0 || x2 > 1.0) throw std::invalid_argument("level_values: x2 outside [0, 1]");
  int e = std::min(static_cast<int>(x2 / g.dx2), g.n2 - 2);
  double t = (x2 - g.x2[e]) / g.dx2;
  if (std::abs(t - 1.0) < 1e-12) {
    ++e;
    t = 0.0;
    if (e == g.n2 - 1) return f.row_copy(e);
  }
  std::vector<double> out(g.n1);
  for (int i = 0; i < g.n1; ++i) out[i] = (1.0 - t) * f(i, e) + t * f(i, e + 1);
  return out;
}

double lp_norm(const ScalarField& f, const MappedGrid& g, double p) {
  return std::pow(weighted_rows(g, [&](int i, int j) { return std::pow(std::abs(f(i, j)), p); }), 1.0 / p);
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace rbslip
