#include "rbslip/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rbslip/operators.hpp"

namespace rbslip {

std::vector<double> boundary_vorticity(const std::vector<double>& u_tau, const BoundaryData& b) {
  if (u_tau.size() != b.size()) throw std::invalid_argument("boundary_vorticity: length mismatch");
  std::vector<double> w(u_tau.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = -2.0 * (b.alpha[i] + b.kappa[i]) * u_tau[i];
  return w;
}

Stepper::Stepper(const MappedGrid& g, const BoundaryData& bottom, const BoundaryData& top, PhysicalParams params,
                 SolverOptions opt)
    : g_(g), bottom_(bottom), top_(top), params_(params), opt_(opt), es_(g, opt.elliptic) {
  if (static_cast<int>(bottom.size()) != g.n1 || static_cast<int>(top.size()) != g.n1)
    throw std::invalid_argument("Stepper: boundary sample count differs from n1");
  if (!(params.pr > 0.0)) throw std::invalid_argument("Stepper: Pr must be positive");
  if (params.ra < 0.0) throw std::invalid_argument("Stepper: Ra must be nonnegative");
  if (!(opt.theta >= 0.5 && opt.theta <= 1.0)) throw std::invalid_argument("Stepper: theta must lie in [0.5, 1]");
  psi_unit_ = es_.solve_poisson_dirichlet(ScalarField(g), std::vector<double>(g.n1, 0.0),
                                          std::vector<double>(g.n1, 1.0));
  circulation_unit_ = circulation_of(psi_unit_);
}

double Stepper::circulation_of(const ScalarField& psi) const {
  return line_integral(boundary_trace(psi, g_, Side::bottom, TraceKind::normal_derivative), g_);
}

double Stepper::wall_vorticity_flux(const ScalarField& omega) const {
  return line_integral(boundary_trace(omega, g_, Side::bottom, TraceKind::normal_derivative), g_);
}

std::vector<double> Stepper::u_tau(const FlowState& s, Side side) const {
  // u = perp-grad psi, so u.tau equals the outward normal derivative of psi
  return boundary_trace(s.psi, g_, side, TraceKind::normal_derivative);
}

void Stepper::recover_velocity(FlowState& s) const {
  VectorField gp = grad_physical(s.psi, g_);
  s.u1 = std::move(gp.c2);
  for (double& v : s.u1.values) v = -v;
  s.u2 = std::move(gp.c1);
}

ScalarField Stepper::advection(const ScalarField& psi, const ScalarField& q) const {
  const int n1 = g_.n1, n2 = g_.n2;
  // contravariant velocity in flattened coordinates: (-d2 psi, d1 psi)
  ScalarField v1 = d2(psi, g_);
  for (double& v : v1.values) v = -v;
  const ScalarField v2 = d1(psi, g_);
  const ScalarField q1 = d1(q, g_);
  const ScalarField q2 = d2(q, g_);
  ScalarField f1(g_), f2(g_);
  for (std::size_t n = 0; n < f1.values.size(); ++n) {
    f1.values[n] = v1.values[n] * q.values[n];
    f2.values[n] = v2.values[n] * q.values[n];
  }
  const ScalarField c1 = d1(f1, g_);
  const ScalarField c2 = d2(f2, g_);
  ScalarField out(g_);
  const bool skew = opt_.advection == AdvectionForm::skew_symmetric;
#pragma omp parallel for schedule(static)
  for (int j = 1; j < n2 - 1; ++j)
    for (int i = 0; i < n1; ++i) {
      const double cons = c1(i, j) + c2(i, j);
      if (skew) {
        const double adv = v1(i, j) * q1(i, j) + v2(i, j) * q2(i, j);
        out(i, j) = 0.5 * (cons + adv);
      } else {
        out(i, j) = cons;
      }
    }
  return out;
}

void Stepper::explicit_terms(const FlowState& s, ScalarField& n_omega, ScalarField& n_temp) const {
  n_temp = advection(s.psi, s.temp);
  for (double& v : n_temp.values) v = -v;
  n_omega = advection(s.psi, s.omega);
  const VectorField gt = grad_physical(s.temp, g_);
  const double f = params_.pr * params_.ra;
  const int n1 = g_.n1;
  for (int j = 1; j < g_.n2 - 1; ++j)
    for (int i = 0; i < n1; ++i) n_omega(i, j) = -n_omega(i, j) + f * gt.c1(i, j);
}

double Stepper::cfl_dt(const FlowState& s) const {
  double m1 = 0.0, m2 = 0.0;
  for (int j = 0; j < g_.n2; ++j)
    for (int i = 0; i < g_.n1; ++i) {
      m1 = std::max(m1, std::abs(s.u1(i, j)));
      m2 = std::max(m2, std::abs(s.u2(i, j) - g_.hp[i] * s.u1(i, j)));
    }
  double lim = INFINITY;
  if (m1 > 0.0) lim = std::min(lim, g_.dx1 / m1);
  if (m2 > 0.0) lim = std::min(lim, g_.dx2 / m2);
  return opt_.cfl * lim;
}

double Stepper::explicit_dt_limit() const {
  const double rp = params_.ra * params_.pr;
  return rp > 0.0 ? 0.2 / std::sqrt(rp) : INFINITY;
}

FlowState Stepper::initial_state(const ScalarField& temp0, const ScalarField& psi0) const {
  FlowState s;
  s.temp = temp0;
  for (int i = 0; i < g_.n1; ++i) {
    s.temp(i, 0) = 1.0;
    s.temp(i, g_.n2 - 1) = 0.0;
  }
  s.psi = psi0;
  for (int i = 0; i < g_.n1; ++i) s.psi(i, 0) = s.psi(i, g_.n2 - 1) = 0.0;
  s.psi_top = 0.0;
  s.omega = apply_L_tilde(s.psi, g_);
  s.omega.set_row(0, boundary_vorticity(u_tau(s, Side::bottom), bottom_));
  s.omega.set_row(g_.n2 - 1, boundary_vorticity(u_tau(s, Side::top), top_));
  s.circulation = circulation_of(s.psi);
  recover_velocity(s);
  s.n_omega_prev = ScalarField(g_);
  s.n_temp_prev = ScalarField(g_);
  return s;
}

std::array<std::vector<double>, 2> Stepper::wall_map(double sigma_w, const ScalarField& rhs_w,
                                                     const std::vector<double>& wb, const std::vector<double>& wt,
                                                     double circ_old, double flux_old, double dt, double th,
                                                     const ScalarField* omega_guess, ScalarField& psi0, FlowState& s,
                                                     int& iterations) const {
  const int n1 = g_.n1, n2 = g_.n2;
  const std::vector<double> zero(n1, 0.0);
  SolveStats st;
  s.omega = es_.solve_helmholtz(sigma_w, rhs_w, wb, wt, omega_guess, &st);
  iterations += st.iterations;
  const double flux_new = wall_vorticity_flux(s.omega);
  s.circulation = circ_old + dt * params_.pr * (th * flux_new + (1.0 - th) * flux_old);
  psi0 = es_.solve_poisson_dirichlet(s.omega, zero, zero, &psi0, &st);
  iterations += st.iterations;
  s.psi_top = (s.circulation - circulation_of(psi0)) / circulation_unit_;
  s.psi = psi0;
  for (std::size_t q = 0; q < s.psi.values.size(); ++q) s.psi.values[q] += s.psi_top * psi_unit_.values[q];
  for (int i = 0; i < n1; ++i) {
    s.psi(i, 0) = 0.0;
    s.psi(i, n2 - 1) = s.psi_top;
  }
  return {boundary_vorticity(u_tau(s, Side::bottom), bottom_), boundary_vorticity(u_tau(s, Side::top), top_)};
}

void Stepper::prepare_coupling(double sigma_w, double dt, double th) const {
  if (dt == coupling_dt_ && th == coupling_theta_) return;
  const int n1 = g_.n1;
  const ScalarField rhs(g_);
  // responses to a unit wall value at i = 0 on each wall, with all inhomogeneous data zeroed
  std::array<std::vector<double>, 4> kernel;  // bb, bt, tb, tt: (response wall)(probed wall)
  for (int w = 0; w < 2; ++w) {
    std::vector<double> pb(n1, 0.0), pt(n1, 0.0);
    (w == 0 ? pb : pt)[0] = 1.0;
    FlowState scratch;
    ScalarField psi0(g_);
    int it = 0;
    const auto [rb, rt] = wall_map(sigma_w, rhs, pb, pt, 0.0, 0.0, dt, th, nullptr, psi0, scratch, it);
    kernel[w] = rb;
    kernel[2 + w] = rt;
  }
  coupling_inv_.assign(n1, {});
  for (int k = 0; k < n1; ++k) {
    std::array<std::complex<double>, 4> a{};
    for (int m = 0; m < n1; ++m) {
      const std::complex<double> e = std::polar(1.0, -2.0 * std::numbers::pi * k * m / n1);
      for (int q = 0; q < 4; ++q) a[q] += kernel[q][m] * e;
    }
    // invert [[1 - bb, -bt], [-tb, 1 - tt]]
    const std::complex<double> p00 = 1.0 - a[0], p01 = -a[1], p10 = -a[2], p11 = 1.0 - a[3];
    const std::complex<double> det = p00 * p11 - p01 * p10;
    coupling_inv_[k] = {p11 / det, -p01 / det, -p10 / det, p00 / det};
  }
  coupling_dt_ = dt;
  coupling_theta_ = th;
}

std::array<std::vector<double>, 2> Stepper::coupling_correction(const std::vector<double>& rb,
                                                                const std::vector<double>& rt) const {
  const int n1 = g_.n1;
  std::vector<std::complex<double>> fb(n1), ft(n1);
  for (int k = 0; k < n1; ++k)
    for (int m = 0; m < n1; ++m) {
      const std::complex<double> e = std::polar(1.0, -2.0 * std::numbers::pi * k * m / n1);
      fb[k] += rb[m] * e;
      ft[k] += rt[m] * e;
    }
  for (int k = 0; k < n1; ++k) {
    const auto& p = coupling_inv_[k];
    const std::complex<double> b = p[0] * fb[k] + p[1] * ft[k], t = p[2] * fb[k] + p[3] * ft[k];
    fb[k] = b;
    ft[k] = t;
  }
  std::array<std::vector<double>, 2> out{std::vector<double>(n1, 0.0), std::vector<double>(n1, 0.0)};
  for (int i = 0; i < n1; ++i) {
    std::complex<double> b = 0.0, t = 0.0;
    for (int k = 0; k < n1; ++k) {
      const std::complex<double> e = std::polar(1.0, 2.0 * std::numbers::pi * k * i / n1);
      b += fb[k] * e;
      t += ft[k] * e;
    }
    out[0][i] = b.real() / n1;
    out[1][i] = t.real() / n1;
  }
  return out;
}

StepResult Stepper::step(FlowState& s, double dt) const {
  StepResult res;
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const double dt_cfl = cfl_dt(s);
  if (dt > dt_cfl * (1.0 + 1e-12)) {
    res.accepted = false;
    res.suggested_dt = 0.9 * dt_cfl;
    return res;
  }
  const int n1 = g_.n1, n2 = g_.n2;
  // two backward-Euler steps first, so Crank-Nicolson does not ring on inconsistent initial wall data
  const double th = s.step < 2 ? 1.0 : opt_.theta;
  const double pr = params_.pr;

  ScalarField n_omega, n_temp;
  explicit_terms(s, n_omega, n_temp);
  ScalarField ab_omega = n_omega, ab_temp = n_temp;
  if (s.has_history) {
    const double r = dt / s.dt_prev;
    const double c0 = 1.0 + 0.5 * r, c1 = -0.5 * r;
    for (std::size_t q = 0; q < ab_omega.values.size(); ++q) {
      ab_omega.values[q] = c0 * n_omega.values[q] + c1 * s.n_omega_prev.values[q];
      ab_temp.values[q] = c0 * n_temp.values[q] + c1 * s.n_temp_prev.values[q];
    }
  }

  // temperature
  SolveStats st;
  {
    const double sigma = 1.0 / (th * dt);
    ScalarField rhs = apply_L_tilde(s.temp, g_);
    for (int j = 1; j < n2 - 1; ++j)
      for (int i = 0; i < n1; ++i)
        rhs(i, j) = sigma * s.temp(i, j) + (1.0 - th) / th * rhs(i, j) + ab_temp(i, j) / th;
    s.temp = es_.solve_helmholtz(sigma, rhs, std::vector<double>(n1, 1.0), std::vector<double>(n1, 0.0), &s.temp,
                                 &st);
    res.cg_iterations += st.iterations;
  }

  // vorticity, circulation, stream function
  const double sigma_w = 1.0 / (th * dt * pr);
  ScalarField rhs_w = apply_L_tilde(s.omega, g_);
  for (int j = 1; j < n2 - 1; ++j)
    for (int i = 0; i < n1; ++i)
      rhs_w(i, j) = sigma_w * s.omega(i, j) + (1.0 - th) / th * rhs_w(i, j) + ab_omega(i, j) / (th * pr);
  const double flux_old = wall_vorticity_flux(s.omega);
  std::vector<double> wb = s.omega.row_copy(0), wt = s.omega.row_copy(n2 - 1);
  const ScalarField omega_old = s.omega;
  ScalarField psi0 = s.psi;
  for (std::size_t q = 0; q < psi0.values.size(); ++q) psi0.values[q] -= s.psi_top * psi_unit_.values[q];
  const double circ_old = s.circulation;

  if (opt_.coupling_sweeps > 0) prepare_coupling(sigma_w, dt, th);
  for (int sweep = 0;; ++sweep) {
    int it = 0;
    const auto [nb, nt] = wall_map(sigma_w, rhs_w, wb, wt, circ_old, flux_old, dt, th, &omega_old, psi0, s, it);
    res.cg_iterations += it;
    double change = 0.0, scale = 1.0;
    std::vector<double> rb(n1), rt(n1);
    for (int i = 0; i < n1; ++i) {
      rb[i] = nb[i] - wb[i];
      rt[i] = nt[i] - wt[i];
      change = std::max({change, std::abs(rb[i]), std::abs(rt[i])});
      scale = std::max({scale, std::abs(nb[i]), std::abs(nt[i])});
    }
    res.sweeps = sweep;
    if (sweep >= opt_.coupling_sweeps || change <= opt_.coupling_tol * scale) {
      wb = nb;
      wt = nt;
      break;
    }
    // Newton step on w = F(w); plain substitution diverges once alpha dx2 is O(1)
    const auto [cb, ct] = coupling_correction(rb, rt);
    for (int i = 0; i < n1; ++i) {
      wb[i] += cb[i];
      wt[i] += ct[i];
    }
  }
  s.omega.set_row(0, wb);
  s.omega.set_row(n2 - 1, wt);
  recover_velocity(s);

  s.n_omega_prev = std::move(n_omega);
  s.n_temp_prev = std::move(n_temp);
  s.has_history = true;
  s.dt_prev = dt;
  s.time += dt;
  ++s.step;
  return res;
}

ScalarField recover_pressure(const FlowState& s, const PhysicalParams& params, const MappedGrid& g,
                             const BoundaryData& bottom, const BoundaryData& top, PressureStats* stats) {
  const int n1 = g.n1, n2 = g.n2;
  const VectorField gu1 = grad_physical(s.u1, g);
  const VectorField gu2 = grad_physical(s.u2, g);
  const VectorField gt = grad_physical(s.temp, g);
  ScalarField rhs(g);
  const double ip = 1.0 / params.pr;
  for (std::size_t q = 0; q < rhs.values.size(); ++q) {
    const double a = gu1.c1.values[q], b = gu1.c2.values[q], c = gu2.c1.values[q], d = gu2.c2.values[q];
    rhs.values[q] = -ip * (a * a + 2.0 * b * c + d * d) + params.ra * gt.c2.values[q];
  }
  std::vector<double> nb(n1), nt(n1);
  for (const BoundaryData* bd : {&bottom, &top}) {
    const Side side = bd->side;
    const int j = side == Side::bottom ? 0 : n2 - 1;
    std::vector<double> ut(n1), w(n1);
    for (int i = 0; i < n1; ++i) {
      ut[i] = s.u1(i, j) * bd->tangent[i][0] + s.u2(i, j) * bd->tangent[i][1];
      w[i] = (bd->alpha[i] + bd->kappa[i]) * ut[i];
    }
    g.fft->derivative(w.data(), w.data());
    const double dir = side == Side::bottom ? 1.0 : -1.0;  // d/dlambda = dir (1/s) d/dy1
    std::vector<double>& out = side == Side::bottom ? nb : nt;
    for (int i = 0; i < n1; ++i) {
      out[i] = -ip * bd->kappa[i] * ut[i] * ut[i] + 2.0 * dir * w[i] / g.s[i];
      if (side == Side::bottom) out[i] += params.ra * bd->normal[i][1];
    }
  }
  EllipticSolver es(g);
  SolveStats st;
  ScalarField p = es.solve_poisson_neumann(rhs, nb, nt, &st);
  if (stats) {
    stats->compatibility_defect = st.compatibility_defect;
    stats->compatibility_defect_relative = st.compatibility_defect_relative;
    stats->iterations = st.iterations;
  }
  return p;
}

ScalarField Stepper::recover_pressure(const FlowState& s, PressureStats* stats) const {
  return rbslip::recover_pressure(s, params_, g_, bottom_, top_, stats);
}

ScalarField initial_temperature(const MappedGrid& g, double amplitude, std::uint64_t seed, int n_modes) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<double> amp(n_modes), phase(n_modes);
  for (int k = 0; k < n_modes; ++k) {
    amp[k] = 0.5 + 0.5 * uniform();
    phase[k] = 2.0 * std::numbers::pi * uniform();
  }
  ScalarField t(g);
  std::vector<double> col(g.n1, 0.0);
  double peak = 0.0;
  for (int i = 0; i < g.n1; ++i) {
    for (int k = 0; k < n_modes; ++k)
      col[i] += amp[k] * std::cos(2.0 * std::numbers::pi * (k + 1) * g.x1[i] / g.gamma + phase[k]);
    peak = std::max(peak, std::abs(col[i]));
  }
  const double scale = peak > 0.0 ? amplitude / peak : 0.0;
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i)
      t(i, j) = 1.0 - g.x2[j] + scale * col[i] * std::sin(std::numbers::pi * g.x2[j]);
  for (int i = 0; i < g.n1; ++i) {
    t(i, 0) = 1.0;
    t(i, g.n2 - 1) = 0.0;
  }
  return t;
}

ScalarField stream_function_from_modes(const MappedGrid& g, const std::vector<StreamMode>& modes) {
  ScalarField psi(g);
  for (const StreamMode& m : modes) {
    for (int j = 1; j < g.n2 - 1; ++j) {
      const double sy = std::sin(std::numbers::pi * m.m * g.x2[j]);
      for (int i = 0; i < g.n1; ++i) {
        const double ph = 2.0 * std::numbers::pi * m.k * g.x1[i] / g.gamma;
        psi(i, j) += sy * (m.cos_amp * std::cos(ph) + m.sin_amp * std::sin(ph));
      }
    }
  }
  return psi;
}

}  // namespace rbslip
