#include "rbslip/verify.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rbslip/diagnostics.hpp"
#include "rbslip/elliptic.hpp"
#include "rbslip/operators.hpp"
#include "rbslip/solver.hpp"

namespace rbslip {

using std::numbers::pi;

bool SuiteResult::pass() const {
  for (const CheckRow& r : rows)
    if (!r.pass) return false;
  return true;
}

std::string SuiteResult::table() const {
  std::ostringstream os;
  os << "suite " << suite << '\n';
  os << std::left << std::setw(44) << "check" << std::setw(16) << "value" << std::setw(16) << "threshold"
     << "result\n";
  for (const CheckRow& r : rows) {
    os << std::left << std::setw(44) << r.name << std::setw(16) << std::setprecision(6) << r.value << std::setw(16)
       << r.threshold << (r.pass ? "PASS" : "FAIL");
    if (!r.detail.empty()) os << "  " << r.detail;
    os << '\n';
  }
  os << (pass() ? "all checks passed" : "some checks FAILED") << '\n';
  return os.str();
}

HeightProfile rough_fixture() {
  HeightProfile p;
  p.gamma = 1.0;
  p.modes = {{1, 0.0, 0.1}};
  return p;
}

GeometryIdentities geometry_identities(const HeightProfile& profile, int n1) {
  const FourierSeries alpha{profile.gamma, 1.0, {}};
  const auto [b, t] = boundary_frames(profile, n1, alpha);
  GeometryIdentities r;
  const double dx1 = profile.gamma / n1;
  for (const BoundaryData* w : {&b, &t}) {
    double integral = 0.0;
    for (std::size_t i = 0; i < w->size(); ++i) {
      const auto& n = w->normal[i];
      const auto& tau = w->tangent[i];
      r.tau_dot_n = std::max(r.tau_dot_n, std::abs(tau[0] * n[0] + tau[1] * n[1]));
      r.normal_unit = std::max(r.normal_unit, std::abs(std::hypot(n[0], n[1]) - 1.0));
      integral += w->kappa[i] * w->ds_weight[i] * dx1;
    }
    r.kappa_integral = std::max(r.kappa_integral, std::abs(integral));
  }
  for (std::size_t i = 0; i < b.size(); ++i) r.kappa_antisym = std::max(r.kappa_antisym, std::abs(t.kappa[i] + b.kappa[i]));
  return r;
}

namespace {

// f = cos(2 pi y1) e^{y2} + sin(2 pi y1) y2^2 in physical coordinates
double mf(double y1, double y2) { return std::cos(2 * pi * y1) * std::exp(y2) + std::sin(2 * pi * y1) * y2 * y2; }
double mf_1(double y1, double y2) {
  return -2 * pi * std::sin(2 * pi * y1) * std::exp(y2) + 2 * pi * std::cos(2 * pi * y1) * y2 * y2;
}
double mf_2(double y1, double y2) { return std::cos(2 * pi * y1) * std::exp(y2) + 2 * y2 * std::sin(2 * pi * y1); }
double mf_lap(double y1, double y2) {
  return (1 - 4 * pi * pi) * std::cos(2 * pi * y1) * std::exp(y2) + std::sin(2 * pi * y1) * (2 - 4 * pi * pi * y2 * y2);
}

double max_err(const ScalarField& a, const ScalarField& b, int j0, int j1) {
  double e = 0.0;
  for (int j = j0; j < j1; ++j)
    for (int i = 0; i < a.n1; ++i) e = std::max(e, std::abs(a(i, j) - b(i, j)));
  return e;
}

}  // namespace

std::vector<MmsStudy> mms_study(const HeightProfile& profile, const std::vector<int>& n2s, int n1) {
  if (profile.gamma != 1.0) throw std::invalid_argument("mms_study: the manufactured solution needs gamma = 1");
  std::vector<MmsStudy> out(4);
  out[0].op = "grad_physical";
  out[1].op = "apply_L_tilde";
  out[2].op = "solve_poisson_dirichlet";
  out[3].op = "solve_poisson_neumann";
  std::vector<double> hs;
  for (int n2 : n2s) {
    const MappedGrid g(profile, n1, n2);
    hs.push_back(g.dx2);
    const ScalarField f = sample_physical(g, mf);
    const ScalarField lap = sample_physical(g, mf_lap);

    const VectorField gr = grad_physical(f, g);
    const double eg = std::max(max_err(gr.c1, sample_physical(g, mf_1), 0, n2), max_err(gr.c2, sample_physical(g, mf_2), 0, n2));
    const double el = max_err(apply_L_tilde(f, g), lap, 1, n2 - 1);

    const EllipticSolver es(g);
    const ScalarField ud = es.solve_poisson_dirichlet(lap, f.row_copy(0), f.row_copy(n2 - 1));
    const double ed = max_err(ud, f, 0, n2);

    std::vector<double> nb(n1), nt(n1);
    for (int i = 0; i < n1; ++i) {
      const double y1 = g.x1[i], s = g.s[i], hp = g.hp[i];
      const double yb = g.y2(i, 0), yt = g.y2(i, n2 - 1);
      nb[i] = (hp * mf_1(y1, yb) - mf_2(y1, yb)) / s;
      nt[i] = (-hp * mf_1(y1, yt) + mf_2(y1, yt)) / s;
    }
    ScalarField un = es.solve_poisson_neumann(lap, nb, nt);
    ScalarField diff = un;
    for (std::size_t k = 0; k < diff.values.size(); ++k) diff.values[k] -= f.values[k];
    const double mean = volume_integral(diff, g) / g.gamma;
    for (double& v : diff.values) v -= mean;
    const double en = max_abs(diff);

    for (auto [k, e] : {std::pair{0, eg}, {1, el}, {2, ed}, {3, en}}) {
      out[k].n2.push_back(n2);
      out[k].errors.push_back(e);
    }
  }
  for (MmsStudy& m : out) {
    m.min_order = INFINITY;
    for (std::size_t k = 1; k < m.errors.size(); ++k)
      m.min_order = std::min(m.min_order, std::log(m.errors[k - 1] / m.errors[k]) / std::log(hs[k - 1] / hs[k]));
  }
  return out;
}

DecayFit energy_decay_fit(double alpha, double pr, double t_end, int n1, int n2, double dt) {
  HeightProfile profile;
  profile.gamma = 2.0;
  const MappedGrid g(profile, n1, n2);
  const auto [b, t] = boundary_frames(profile, n1, FourierSeries{profile.gamma, alpha, {}});
  const PhysicalParams params{0.0, pr};
  const Stepper st(g, b, t, params);
  FlowState s = st.initial_state(ScalarField(g),
                                 stream_function_from_modes(g, {{1, 1, 0.1, 0.0}, {2, 1, 0.0, 0.05}, {1, 2, 0.03, 0.02}}));
  DecayFit fit;
  fit.bound_rate = 0.25 * std::min(1.0, alpha) * pr;
  fit.ec = check_condition_ec(b, t).pass;
  // least squares on log E over the second half of the run
  fit.t_fit_begin = 0.5 * t_end;
  fit.t_fit_end = t_end;
  double prev = energy_terms(s, g, b, t, params).energy;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  while (s.time < t_end - 1e-12) {
    const StepResult r = st.step(s, std::min(dt, t_end - s.time));
    if (!r.accepted) throw SolverError("energy_decay_fit: CFL rejection");
    const double e = energy_terms(s, g, b, t, params).energy;
    if (!(e < prev)) fit.monotone = false;
    prev = e;
    if (s.time >= fit.t_fit_begin) {
      const double y = std::log(e);
      sx += s.time;
      sy += y;
      sxx += s.time * s.time;
      sxy += s.time * y;
      n += 1;
    }
  }
  fit.rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

ConductionCheck conduction_check(double ra, long steps, double dt, int n1, int n2) {
  HeightProfile profile;
  profile.gamma = 2.0;
  const MappedGrid g(profile, n1, n2);
  const auto [b, t] = boundary_frames(profile, n1, FourierSeries{profile.gamma, 1.0, {}});
  const PhysicalParams params{ra, 10.0};
  const Stepper st(g, b, t, params);
  FlowState s = st.initial_state(initial_temperature(g, 0.0, 1), ScalarField(g));
  for (long k = 0; k < steps; ++k)
    if (!st.step(s, dt).accepted) throw SolverError("conduction_check: CFL rejection");
  ConductionCheck c;
  c.steps = steps;
  c.nu_flux = nusselt_flux(s, g);
  c.nu_gradsq = nusselt_gradsq(s, g);
  c.nu_strip = nusselt_strip(s, g, 0.5);
  c.vertical_transport = vertical_transport(s, g);
  c.velocity_l2 = std::sqrt(energy_terms(s, g, b, t, params).energy);
  return c;
}

SuiteResult verify_geometry() {
  SuiteResult r{"geometry", {}};
  HeightProfile flat;
  flat.gamma = 2.0;
  const std::pair<const char*, HeightProfile> cases[] = {{"flat", flat}, {"rough", rough_fixture()}};
  for (const auto& [name, p] : cases) {
    const GeometryIdentities gi = geometry_identities(p, 256);
    const std::string pre = std::string(name) + ": ";
    r.rows.push_back({pre + "max |tau.n|", gi.tau_dot_n, 1e-14, gi.tau_dot_n <= 1e-14, ""});
    r.rows.push_back({pre + "max ||n| - 1|", gi.normal_unit, 1e-14, gi.normal_unit <= 1e-14, ""});
    r.rows.push_back({pre + "|int kappa dS|", gi.kappa_integral, 1e-12, gi.kappa_integral <= 1e-12, ""});
    r.rows.push_back({pre + "max |kappa_top + kappa_bottom|", gi.kappa_antisym, 0.0, gi.kappa_antisym == 0.0, ""});
  }
  return r;
}

SuiteResult verify_mms() {
  SuiteResult r{"mms", {}};
  for (const MmsStudy& m : mms_study(rough_fixture(), {32, 64, 128}, 64)) {
    std::ostringstream d;
    d << std::setprecision(3) << "errors";
    for (double e : m.errors) d << ' ' << e;
    r.rows.push_back({"order " + m.op, m.min_order, 1.9, m.min_order >= 1.9, d.str()});
  }
  return r;
}

SuiteResult verify_balances() {
  SuiteResult r{"balances", {}};
  const ConductionCheck c = conduction_check(100.0, 1000, 1e-3, 32, 33);
  const double dev = std::max({std::abs(c.nu_flux - 1), std::abs(c.nu_gradsq - 1), std::abs(c.nu_strip - 1)});
  r.rows.push_back({"conduction Ra=100: max |Nu - 1|", dev, 1e-6, dev <= 1e-6, ""});
  r.rows.push_back({"conduction Ra=100: ||u||_2", c.velocity_l2, 1e-8, c.velocity_l2 <= 1e-8, ""});
  const DecayFit f = energy_decay_fit(1.0, 1.0, 0.2, 32, 33, 1e-3);
  r.rows.push_back({"decay Ra=0: fitted rate / bound rate", f.rate / f.bound_rate, 0.95, f.rate >= 0.95 * f.bound_rate,
                    f.ec ? "ec holds" : "ec violated"});
  r.rows.push_back({"decay Ra=0: energy decreases every step", f.monotone ? 1.0 : 0.0, 1.0, f.monotone, ""});
  return r;
}

SuiteResult run_verify_suite(const std::string& name) {
  if (name == "geometry") return verify_geometry();
  if (name == "mms") return verify_mms();
  if (name == "balances") return verify_balances();
  throw std::invalid_argument("unknown verify suite '" + name + "' (expected geometry, mms or balances)");
}

}  // namespace rbslip
