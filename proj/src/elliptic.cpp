#include "rbslip/elliptic.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "rbslip/operators.hpp"

namespace rbslip {

using cplx = std::complex<double>;

EllipticSolver::EllipticSolver(const MappedGrid& g, EllipticOptions opt) : g_(g), opt_(opt) {
  max_iter_ = opt.max_iterations > 0 ? opt.max_iterations
                                     : static_cast<int>(10.0 * g.n2 * std::sqrt(static_cast<double>(g.n1)));
}

void EllipticSolver::apply(Mode mode, double sigma, const ScalarField& x, ScalarField& out) const {
  if (mode == Mode::dirichlet) {
    out = apply_L_tilde(x, g_);
    const int n1 = g_.n1;
#pragma omp parallel for schedule(static)
    for (int j = 1; j < g_.n2 - 1; ++j)
      for (int i = 0; i < n1; ++i) out(i, j) = sigma * x(i, j) - out(i, j);
  } else {
    out = apply_L_tilde_neumann(x, g_, nullptr, nullptr);
    for (double& v : out.values) v = -v;
  }
}

double EllipticSolver::dot(Mode mode, const ScalarField& a, const ScalarField& b) const {
  const int n2 = g_.n2, n1 = g_.n1;
  std::vector<double> rows(n2, 0.0);
  const int jlo = mode == Mode::dirichlet ? 1 : 0;
  const int jhi = mode == Mode::dirichlet ? n2 - 2 : n2 - 1;
#pragma omp parallel for schedule(static)
  for (int j = jlo; j <= jhi; ++j) {
    double s = 0.0;
    const double* pa = a.row(j);
    const double* pb = b.row(j);
    for (int i = 0; i < n1; ++i) s += pa[i] * pb[i];
    rows[j] = s * g_.w2[j];
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

// Null space of the pure-Neumann operator: constants, and for even n1 the x2-constant
// Nyquist column pattern (the collocation derivative drops that mode).
void EllipticSolver::remove_mean(ScalarField& x) const {
  const int n1 = g_.n1, n2 = g_.n2;
  double m0 = 0.0, mn = 0.0, wsum = 0.0;
  for (int j = 0; j < n2; ++j) {
    double s0 = 0.0, sn = 0.0;
    for (int i = 0; i < n1; ++i) {
      s0 += x(i, j);
      sn += (i % 2 == 0 ? 1.0 : -1.0) * x(i, j);
    }
    m0 += g_.w2[j] * s0;
    mn += g_.w2[j] * sn;
    wsum += g_.w2[j];
  }
  m0 /= wsum * n1;
  mn /= wsum * n1;
  const bool nyq = n1 % 2 == 0;
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) x(i, j) -= m0 + (nyq ? (i % 2 == 0 ? mn : -mn) : 0.0);
}

void EllipticSolver::precondition(Mode mode, double sigma, const ScalarField& r, ScalarField& z) const {
  const int n1 = g_.n1, n2 = g_.n2, nm = g_.fft->n_modes();
  const double c = g_.a22_mean;
  const double dx = g_.dx2;
  const double off = -c / (dx * dx);
  std::vector<cplx> spec(static_cast<std::size_t>(n2) * nm);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n2; ++j) g_.fft->forward(r.row(j), spec.data() + static_cast<std::size_t>(j) * nm);

  const int jlo = mode == Mode::dirichlet ? 1 : 0;
  const int jhi = mode == Mode::dirichlet ? n2 - 2 : n2 - 1;
#pragma omp parallel for schedule(static)
  for (int m = 0; m < nm; ++m) {
    const double k = g_.fft->d1_symbol(m);
    const double base = sigma + k * k + 2.0 * c / (dx * dx);
    const int len = jhi - jlo + 1;
    std::vector<double> lo(len, off), di(len, base), up(len, off);
    std::vector<cplx> rhs(len);
    for (int q = 0; q < len; ++q) rhs[q] = spec[static_cast<std::size_t>(q + jlo) * nm + m];
    if (mode == Mode::neumann) {
      up[0] = 2.0 * off;
      lo[len - 1] = 2.0 * off;
      if (k == 0.0 && sigma == 0.0) {
        di[0] = 1.0;
        up[0] = 0.0;
        rhs[0] = 0.0;
      }
    }
    // Thomas sweep, real tridiagonal, complex right-hand side
    for (int q = 1; q < len; ++q) {
      const double w = lo[q] / di[q - 1];
      di[q] -= w * up[q - 1];
      rhs[q] -= w * rhs[q - 1];
    }
    rhs[len - 1] /= di[len - 1];
    for (int q = len - 2; q >= 0; --q) rhs[q] = (rhs[q] - up[q] * rhs[q + 1]) / di[q];
    for (int q = 0; q < len; ++q) spec[static_cast<std::size_t>(q + jlo) * nm + m] = rhs[q];
  }
  if (mode == Mode::dirichlet) {
    for (int m = 0; m < nm; ++m) {
      spec[m] = 0.0;
      spec[static_cast<std::size_t>(n2 - 1) * nm + m] = 0.0;
    }
  }
  z = ScalarField(n1, n2, 0.0, r.bc);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n2; ++j) g_.fft->inverse(spec.data() + static_cast<std::size_t>(j) * nm, z.row(j));
  if (mode == Mode::neumann && sigma == 0.0) remove_mean(z);
}

ScalarField EllipticSolver::pcg(Mode mode, double sigma, const ScalarField& b, ScalarField x,
                                SolveStats* stats) const {
  const double bnorm = std::sqrt(dot(mode, b, b));
  SolveStats local;
  if (bnorm == 0.0) {
    if (stats) *stats = local;
    return x;
  }
  ScalarField ax(g_), r(g_), z(g_);
  if (g_.flat) {
    // the preconditioner is the exact inverse on flat walls
    precondition(mode, sigma, b, x);
    if (stats) {
      apply(mode, sigma, x, ax);
      for (std::size_t n = 0; n < ax.values.size(); ++n) ax.values[n] = b.values[n] - ax.values[n];
      if (mode == Mode::dirichlet)
        for (int i = 0; i < g_.n1; ++i) ax(i, 0) = ax(i, g_.n2 - 1) = 0.0;
      stats->iterations = 1;
      stats->relative_residual = std::sqrt(dot(mode, ax, ax)) / bnorm;
    }
    return x;
  }
  apply(mode, sigma, x, ax);
  r = b;
  for (std::size_t n = 0; n < r.values.size(); ++n) r.values[n] -= ax.values[n];
  if (mode == Mode::dirichlet)
    for (int i = 0; i < g_.n1; ++i) r(i, 0) = r(i, g_.n2 - 1) = 0.0;
  double res = std::sqrt(dot(mode, r, r)) / bnorm;
  int it = 0;
  if (res > opt_.tolerance) {
    precondition(mode, sigma, r, z);
    ScalarField p = z, ap(g_);
    double rz = dot(mode, r, z);
    for (it = 1; it <= max_iter_; ++it) {
      apply(mode, sigma, p, ap);
      const double alpha = rz / dot(mode, p, ap);
      const std::size_t n = x.values.size();
#pragma omp parallel for schedule(static)
      for (std::size_t q = 0; q < n; ++q) {
        x.values[q] += alpha * p.values[q];
        r.values[q] -= alpha * ap.values[q];
      }
      res = std::sqrt(dot(mode, r, r)) / bnorm;
      if (res <= opt_.tolerance) break;
      precondition(mode, sigma, r, z);
      const double rz_new = dot(mode, r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
#pragma omp parallel for schedule(static)
      for (std::size_t q = 0; q < n; ++q) p.values[q] = z.values[q] + beta * p.values[q];
    }
    if (res > opt_.tolerance) {
      std::ostringstream os;
      os << "elliptic solve did not converge: relative residual " << res << " after " << max_iter_
         << " iterations";
      throw SolverError(os.str());
    }
  }
  local.iterations = it;
  local.relative_residual = res;
  if (stats) {
    stats->iterations = local.iterations;
    stats->relative_residual = local.relative_residual;
  }
  return x;
}

ScalarField EllipticSolver::solve_helmholtz(double sigma, const ScalarField& rhs, const std::vector<double>& bottom,
                                            const std::vector<double>& top, const ScalarField* guess,
                                            SolveStats* stats) const {
  const int n1 = g_.n1, n2 = g_.n2;
  if (static_cast<int>(bottom.size()) != n1 || static_cast<int>(top.size()) != n1)
    throw std::invalid_argument("solve_helmholtz: trace length mismatch");
  ScalarField lift(g_);
  lift.set_row(0, bottom);
  lift.set_row(n2 - 1, top);
  // b = rhs - A(lift) on interior rows
  ScalarField b = apply_L_tilde(lift, g_);
  for (int j = 1; j < n2 - 1; ++j)
    for (int i = 0; i < n1; ++i) b(i, j) += rhs(i, j);
  for (int i = 0; i < n1; ++i) b(i, 0) = b(i, n2 - 1) = 0.0;

  ScalarField x0(g_);
  if (guess) {
    x0 = *guess;
    for (int i = 0; i < n1; ++i) x0(i, 0) = x0(i, n2 - 1) = 0.0;
  }
  ScalarField x = pcg(Mode::dirichlet, sigma, b, std::move(x0), stats);
  for (int i = 0; i < n1; ++i) {
    x(i, 0) = bottom[i];
    x(i, n2 - 1) = top[i];
  }
  x.bc = BcKind::dirichlet_given;
  return x;
}

ScalarField EllipticSolver::solve_poisson_dirichlet(const ScalarField& rhs, const std::vector<double>& bottom,
                                                    const std::vector<double>& top, const ScalarField* guess,
                                                    SolveStats* stats) const {
  ScalarField neg = rhs;
  for (double& v : neg.values) v = -v;
  return solve_helmholtz(0.0, neg, bottom, top, guess, stats);
}

ScalarField EllipticSolver::solve_poisson_neumann(const ScalarField& rhs, const std::vector<double>& bottom_nd,
                                                  const std::vector<double>& top_nd, SolveStats* stats) const {
  const int n1 = g_.n1, n2 = g_.n2;
  if (static_cast<int>(bottom_nd.size()) != n1 || static_cast<int>(top_nd.size()) != n1)
    throw std::invalid_argument("solve_poisson_neumann: trace length mismatch");
  const double dx = g_.dx2;
  ScalarField b(g_, 0.0, BcKind::neumann_given);
  for (std::size_t q = 0; q < b.values.size(); ++q) b.values[q] = -rhs.values[q];
  for (int i = 0; i < n1; ++i) {
    const double gb = -g_.s[i] * bottom_nd[i];  // conormal flux on the bottom row
    const double gt = g_.s[i] * top_nd[i];
    b(i, 0) -= 2.0 * gb / dx;
    b(i, n2 - 1) += 2.0 * gt / dx;
  }
  double defect = 0.0, scale = 0.0;
  for (int j = 0; j < n2; ++j) {
    double s = 0.0, sa = 0.0;
    for (int i = 0; i < n1; ++i) {
      s += b(i, j);
      sa += std::abs(b(i, j));
    }
    defect += g_.w2[j] * s * g_.dx1;
    scale += g_.w2[j] * sa * g_.dx1;
  }
  // b = -(rhs - boundary source); its integral is minus the continuum compatibility mismatch
  remove_mean(b);
  SolveStats local;
  local.compatibility_defect = -defect;
  local.compatibility_defect_relative = scale > 0.0 ? std::abs(defect) / scale : 0.0;
  ScalarField x = pcg(Mode::neumann, 0.0, b, ScalarField(g_, 0.0, BcKind::neumann_given), &local);
  remove_mean(x);
  x.bc = BcKind::neumann_given;
  if (stats) *stats = local;
  return x;
}

}  // namespace rbslip
