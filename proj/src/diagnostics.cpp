#include "rbslip/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rbslip/operators.hpp"

namespace rbslip {

namespace {

// a22 d2 f - h' d1 f on every row
ScalarField vertical_flux(const ScalarField& f, const MappedGrid& g) {
  ScalarField a = d1(f, g);
  ScalarField b = d2(f, g);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) b(i, j) = g.a22[i] * b(i, j) - g.hp[i] * a(i, j);
  return b;
}

std::vector<double> derivative_row(std::vector<double> v, const MappedGrid& g) {
  g.fft->derivative(v.data(), v.data());
  return v;
}

}  // namespace

double nusselt_flux(const FlowState& s, const MappedGrid& g) {
  const std::vector<double> nd = boundary_trace(s.temp, g, Side::bottom, TraceKind::normal_derivative);
  return line_integral(nd, g) / g.gamma;
}

double nusselt_gradsq(const FlowState& s, const MappedGrid& g) {
  const VectorField gt = grad_physical(s.temp, g);
  return (volume_integral(gt.c1, gt.c1, g) + volume_integral(gt.c2, gt.c2, g)) / g.gamma;
}

double nusselt_strip(const FlowState& s, const MappedGrid& g, double x2) {
  if (!(x2 >= 0.0 && x2 <= 1.0)) throw std::invalid_argument("nusselt_strip: level outside [0, 1]");
  // (u T - grad T).(-h', 1) = T d1 psi - (a22 d2 T - h' d1 T)
  const ScalarField dpsi = d1(s.psi, g);
  ScalarField q = vertical_flux(s.temp, g);
  for (std::size_t n = 0; n < q.values.size(); ++n) q.values[n] = dpsi.values[n] * s.temp.values[n] - q.values[n];
  return column_integral(level_values(q, g, x2), g) / g.gamma;
}

double vertical_transport(const FlowState& s, const MappedGrid& g) {
  const ScalarField dt = d2(s.temp, g);
  ScalarField q(g);
  for (std::size_t n = 0; n < q.values.size(); ++n) q.values[n] = s.u2.values[n] * s.temp.values[n] - dt.values[n];
  return volume_integral(q, g) / g.gamma;
}

EnergyTerms energy_terms(const FlowState& s, const MappedGrid& g, const BoundaryData& bottom, const BoundaryData& top,
                         const PhysicalParams& params) {
  EnergyTerms e;
  e.energy = volume_integral(s.u1, s.u1, g) + volume_integral(s.u2, s.u2, g);
  const VectorField a = grad_physical(s.u1, g);
  const VectorField b = grad_physical(s.u2, g);
  e.grad_u_sq = volume_integral(a.c1, a.c1, g) + volume_integral(a.c2, a.c2, g) + volume_integral(b.c1, b.c1, g) +
                volume_integral(b.c2, b.c2, g);
  for (const BoundaryData* bd : {&bottom, &top}) {
    const std::vector<double> ut = boundary_trace(s.psi, g, bd->side, TraceKind::normal_derivative);
    std::vector<double> f(g.n1), k(g.n1);
    for (int i = 0; i < g.n1; ++i) {
      f[i] = (2.0 * bd->alpha[i] + bd->kappa[i]) * ut[i] * ut[i];
      k[i] = bd->kappa[i] * ut[i] * ut[i];
    }
    e.boundary_friction += line_integral(f, g);
    e.kappa_u_tau_sq += line_integral(k, g);
  }
  e.buoyancy_flux = params.ra * volume_integral(s.temp, s.u2, g);
  e.enstrophy = volume_integral(s.omega, s.omega, g);
  return e;
}

double energy_balance_residual(double d_energy_dt, const EnergyTerms& e, const PhysicalParams& params) {
  const double lhs = d_energy_dt / (2.0 * params.pr) + e.grad_u_sq + e.boundary_friction;
  const double scale = std::max({std::abs(e.buoyancy_flux), e.grad_u_sq, 1.0});
  return (lhs - e.buoyancy_flux) / scale;
}

double EnstrophyTerms::max_magnitude() const {
  double m = 0.0;
  for (double v : values()) m = std::max(m, std::abs(v));
  return m;
}

EnstrophyTerms enstrophy_terms(const FlowState& s, const ScalarField& p, const MappedGrid& g,
                               const BoundaryData& bottom, const BoundaryData& top, const PhysicalParams& params) {
  EnstrophyTerms t;
  const VectorField gw = grad_physical(s.omega, g);
  t.grad_omega_sq = volume_integral(gw.c1, gw.c1, g) + volume_integral(gw.c2, gw.c2, g);
  const VectorField gt = grad_physical(s.temp, g);
  t.buoyancy = -params.ra * volume_integral(s.omega, gt.c1, g);
  t.omega_sq_half_over_pr = volume_integral(s.omega, s.omega, g) / (2.0 * params.pr);

  for (const BoundaryData* bd : {&bottom, &top}) {
    const bool bot = bd->side == Side::bottom;
    const double dir = bot ? 1.0 : -1.0;  // tau . e1 has this sign
    const int j = bot ? 0 : g.n2 - 1;
    const std::vector<double> ut = boundary_trace(s.psi, g, bd->side, TraceKind::normal_derivative);
    const std::vector<double> dp = derivative_row(p.row_copy(j), g);
    const std::vector<double> dut = derivative_row(ut, g);
    std::vector<double> w(g.n1), slip(g.n1);
    double press = 0.0, inertia = 0.0, grav = 0.0;
    for (int i = 0; i < g.n1; ++i) {
      const double ak = bd->alpha[i] + bd->kappa[i];
      w[i] = ak * ut[i];
      slip[i] = ak * ut[i] * ut[i];
      // tau.grad = dir (1/s) d/dy1 along the wall; the line element cancels 1/s
      press += ak * ut[i] * dp[i];
      inertia += ak * ut[i] * ut[i] * dut[i];
      if (bot) grav += ak * ut[i] * g.hp[i];  // n1 dS = h' dy1 on the bottom wall
    }
    t.wall_pressure += 2.0 * dir * press * g.dx1;
    t.wall_inertia += 2.0 / params.pr * dir * inertia * g.dx1;
    t.wall_gravity += -2.0 * params.ra * grav * g.dx1;
    t.wall_slip_energy_over_pr += line_integral(slip, g) / params.pr;
    // int (a+k) u_tau dp = -int p d((a+k) u_tau)
    const std::vector<double> dw = derivative_row(w, g);
    double bp = 0.0;
    for (int i = 0; i < g.n1; ++i) bp -= p(i, j) * dw[i];
    t.wall_pressure_by_parts += 2.0 * dir * bp * g.dx1;
  }
  return t;
}

DiagnosticsRecord sample_diagnostics(const FlowState& s, const MappedGrid& g, const BoundaryData& bottom,
                                     const BoundaryData& top, const PhysicalParams& params, const ScalarField* pressure,
                                     double pressure_defect) {
  DiagnosticsRecord r;
  r.time = s.time;
  r.nu_flux = nusselt_flux(s, g);
  r.nu_gradsq = nusselt_gradsq(s, g);
  for (std::size_t k = 0; k < kStripLevels.size(); ++k) r.nu_strip[k] = nusselt_strip(s, g, kStripLevels[k]);
  r.vertical_transport = vertical_transport(s, g);
  r.energy = energy_terms(s, g, bottom, top, params);
  if (pressure) {
    r.enstrophy = enstrophy_terms(s, *pressure, g, bottom, top, params);
    r.enstrophy->pressure_defect = pressure_defect;
  }
  const auto [mn, mx] = std::minmax_element(s.temp.values.begin(), s.temp.values.end());
  r.temp_min = *mn;
  r.temp_max = *mx;
  r.omega_lp = {lp_norm(s.omega, g, 2.0), lp_norm(s.omega, g, 4.0), lp_norm(s.omega, g, 8.0)};
  r.psi_top = s.psi_top;
  r.psi_top_mean_flow = -volume_integral(s.u1, g) / g.gamma;
  return r;
}

void RunningStat::add(double v) {
  ++count;
  mean += (v - mean) / static_cast<double>(count);
  max = std::max(max, v);
  min = std::min(min, v);
}

double Averages::energy_residual(const PhysicalParams& p) const {
  if (samples == 0) return 0.0;
  const double dedt = span() > 0.0 ? (energy_last - energy_first) / span() : 0.0;
  EnergyTerms e;
  e.grad_u_sq = grad_u_sq.mean;
  e.boundary_friction = boundary_friction.mean;
  e.buoyancy_flux = buoyancy_flux.mean;
  return energy_balance_residual(dedt, e, p);
}

double Averages::enstrophy_residual() const {
  if (enstrophy_samples == 0) return 0.0;
  const double sp = ens_t_last - ens_t_first;
  double sum = sp > 0.0 ? (ens_transient_last - ens_transient_first) / sp : 0.0;
  double scale = 0.0;
  for (const RunningStat& r : enstrophy_terms) {
    sum += r.mean;
    scale = std::max(scale, std::abs(r.mean));
  }
  return scale > 0.0 ? sum / scale : 0.0;
}

double Averages::nu_strip_spread() const {
  double lo = INFINITY, hi = -INFINITY;
  for (const RunningStat& r : nu_strip) {
    lo = std::min(lo, r.mean);
    hi = std::max(hi, r.mean);
  }
  return samples > 0 ? hi - lo : 0.0;
}

Recorder::Recorder(PhysicalParams params, double burn_in, int precision)
    : params_(params), burn_in_(burn_in), precision_(precision) {}

void Recorder::set_csv(std::ostream* csv, bool write_header) {
  csv_ = csv;
  if (csv_ && write_header) *csv_ << csv_header() << '\n';
}

const char* Recorder::csv_header() {
  return "time,nu_flux,nu_gradsq,nu_strip_25,nu_strip_50,nu_strip_75,energy,enstrophy,grad_u_sq,"
         "boundary_friction,buoyancy_flux,energy_residual,enstrophy_residual,temp_min,temp_max";
}

std::string Recorder::csv_row(const DiagnosticsRecord& r) const {
  std::ostringstream os;
  os.precision(precision_);
  os << r.time << ',' << r.nu_flux << ',' << r.nu_gradsq << ',' << r.nu_strip[0] << ',' << r.nu_strip[1] << ','
     << r.nu_strip[2] << ',' << r.energy.energy << ',' << r.energy.enstrophy << ',' << r.energy.grad_u_sq << ','
     << r.energy.boundary_friction << ',' << r.energy.buoyancy_flux << ',' << r.energy_residual << ',';
  if (r.enstrophy) os << r.enstrophy_residual;
  else os << "nan";
  os << ',' << r.temp_min << ',' << r.temp_max;
  return os.str();
}

void Recorder::add(DiagnosticsRecord r) {
  if (!records_.empty() && r.time < records_.back().time)
    throw std::invalid_argument("Recorder: samples must be added in time order");
  records_.push_back(std::move(r));
  if (records_.size() >= 2) finalize(records_.size() - 2, false);
}

void Recorder::flush() {
  if (n_final_ < records_.size()) finalize(records_.size() - 1, true);
}

namespace {

double ens_transient(const EnstrophyTerms& e) { return e.omega_sq_half_over_pr + e.wall_slip_energy_over_pr; }

}  // namespace

void Recorder::finalize(std::size_t k, bool last) {
  DiagnosticsRecord& r = records_[k];
  const std::size_t n = records_.size();
  // neighbours for the time derivative: centered where possible
  std::size_t a = k > 0 ? k - 1 : k;
  std::size_t b = (!last && k + 1 < n) ? k + 1 : k;
  if (a == b) {
    if (k + 1 < n) b = k + 1;
    else if (k > 0) a = k - 1;
  }
  double dedt = 0.0;
  if (a != b) dedt = (records_[b].energy.energy - records_[a].energy.energy) / (records_[b].time - records_[a].time);
  r.energy_residual = energy_balance_residual(dedt, r.energy, params_);
  if (r.enstrophy) {
    double dd = 0.0;
    if (a != b && records_[a].enstrophy && records_[b].enstrophy)
      dd = (ens_transient(*records_[b].enstrophy) - ens_transient(*records_[a].enstrophy)) /
           (records_[b].time - records_[a].time);
    const double scale = r.enstrophy->max_magnitude();
    r.enstrophy_residual = scale > 0.0 ? (r.enstrophy->sum() + dd) / scale : 0.0;
  }
  n_final_ = k + 1;

  if (r.time >= burn_in_) {
    Averages& av = avg_;
    if (av.samples == 0) {
      av.t_begin = r.time;
      av.energy_first = r.energy.energy;
    }
    ++av.samples;
    av.t_end = r.time;
    av.energy_last = r.energy.energy;
    av.nu_flux.add(r.nu_flux);
    av.nu_gradsq.add(r.nu_gradsq);
    av.vertical_transport.add(r.vertical_transport);
    for (int q = 0; q < 3; ++q) av.nu_strip[q].add(r.nu_strip[q]);
    av.energy.add(r.energy.energy);
    av.grad_u_sq.add(r.energy.grad_u_sq);
    av.boundary_friction.add(r.energy.boundary_friction);
    av.buoyancy_flux.add(r.energy.buoyancy_flux);
    av.enstrophy.add(r.energy.enstrophy);
    av.temp_min.add(r.temp_min);
    av.temp_max.add(r.temp_max);
    for (int q = 0; q < 3; ++q) av.omega_lp[q].add(r.omega_lp[q]);
    if (r.enstrophy) {
      if (av.enstrophy_samples == 0) {
        av.ens_t_first = r.time;
        av.ens_transient_first = ens_transient(*r.enstrophy);
      }
      ++av.enstrophy_samples;
      av.ens_t_last = r.time;
      av.ens_transient_last = ens_transient(*r.enstrophy);
      const auto v = r.enstrophy->values();
      for (int q = 0; q < 5; ++q) av.enstrophy_terms[q].add(v[q]);
    }
    if (r.background) {
      ++av.background_samples;
      av.grad_theta_sq.add(r.background->grad_theta_sq);
      av.theta_u_grad_eta.add(r.background->theta_u_grad_eta);
      av.grad_T_grad_eta.add(r.background->grad_T_grad_eta);
    }
  }
  if (csv_) *csv_ << csv_row(r) << '\n';
}

}  // namespace rbslip
