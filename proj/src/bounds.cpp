#include "rbslip/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rbslip/operators.hpp"

namespace rbslip {

double eta_profile(double x2, double delta) {
  if (x2 <= delta) return 1.0 - x2 / (2.0 * delta);
  if (x2 >= 1.0 - delta) return (1.0 - x2) / (2.0 * delta);
  return 0.5;
}

BackgroundField build_background(double delta, const MappedGrid& g) {
  if (!(delta > 0.0) || delta > 0.5) throw std::invalid_argument("build_background: delta must lie in (0, 1/2]");
  BackgroundField bg;
  bg.delta = delta;
  bg.eta = ScalarField(g);
  for (int j = 0; j < g.n2; ++j) {
    const double e = eta_profile(g.x2[j], delta);
    for (int i = 0; i < g.n1; ++i) bg.eta(i, j) = e;
  }
  // |grad eta|^2 = (1 + h'^2) / (4 delta^2) inside both strips
  double sum = 0.0;
  for (int i = 0; i < g.n1; ++i) sum += g.a22[i];
  bg.grad_eta_sq_avg = 2.0 * delta * sum * g.dx1 / (4.0 * delta * delta) / g.gamma;
  bg.cells_per_strip = delta / g.dx2;
  if (bg.cells_per_strip < 4.0) {
    std::ostringstream os;
    os << "background strip delta=" << delta << " spans only " << bg.cells_per_strip << " cells in x2 (want >= 4)";
    bg.warning = os.str();
  }
  return bg;
}

double grad_eta_sq_quadrature(const BackgroundField& bg, const MappedGrid& g) {
  double total = 0.0;
  for (int e = 0; e < g.n2 - 1; ++e) {
    double row = 0.0;
    for (int i = 0; i < g.n1; ++i) {
      const double d = (bg.eta(i, e + 1) - bg.eta(i, e)) / g.dx2;
      row += g.a22[i] * d * d;
    }
    total += row * g.dx2;
  }
  return total * g.dx1 / g.gamma;
}

ScalarField theta_field(const FlowState& s, const BackgroundField& bg) {
  ScalarField th = s.temp;
  for (std::size_t n = 0; n < th.values.size(); ++n) th.values[n] -= bg.eta.values[n];
  return th;
}

BackgroundSample background_sample(const FlowState& s, const BackgroundField& bg, const MappedGrid& g) {
  BackgroundSample out;
  const double slope = -1.0 / (2.0 * bg.delta);  // d eta / dx2 inside the strips
  const ScalarField theta = theta_field(s, bg);
  const ScalarField dpsi = d1(s.psi, g);
  ScalarField adv(g), flux(g);
  const ScalarField t1 = d1(s.temp, g), t2 = d2(s.temp, g);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      // u.grad eta = eta' (u2 - h' u1) = eta' d1 psi; grad T.grad eta = eta' (a22 d2 T - h' d1 T)
      adv(i, j) = theta(i, j) * slope * dpsi(i, j);
      flux(i, j) = slope * (g.a22[i] * t2(i, j) - g.hp[i] * t1(i, j));
    }
  const double d = bg.delta;
  out.theta_u_grad_eta = (strip_integral(adv, g, 0.0, d) + strip_integral(adv, g, 1.0 - d, 1.0)) / g.gamma;
  out.grad_T_grad_eta = (strip_integral(flux, g, 0.0, d) + strip_integral(flux, g, 1.0 - d, 1.0)) / g.gamma;
  // |grad theta|^2 expanded so the kink of eta is never differenced
  const double grad_t_sq = nusselt_gradsq(s, g);
  out.grad_theta_sq = grad_t_sq - 2.0 * out.grad_T_grad_eta + bg.grad_eta_sq_avg;
  return out;
}

const char* bound_case_name(BoundCase c) {
  switch (c) {
    case BoundCase::interp_kappa_leq_alpha: return "interp_kappa_leq_alpha";
    case BoundCase::interp_general: return "interp_general";
    case BoundCase::three_sevenths: return "three_sevenths";
  }
  return "?";
}

BoundCase parse_bound_case(const std::string& name) {
  for (BoundCase c : {BoundCase::interp_kappa_leq_alpha, BoundCase::interp_general, BoundCase::three_sevenths})
    if (name == bound_case_name(c)) return c;
  throw std::invalid_argument("unknown bound case '" + name +
                              "' (expected interp_kappa_leq_alpha, interp_general or three_sevenths)");
}

BoundParams choose_proof_parameters(BoundCase c, const PhysicalParams& phys, const BoundaryNorms& norms,
                                    const ProofInputs& in) {
  if (!(in.user_c > 0.0)) throw std::invalid_argument("choose_proof_parameters: C must be positive");
  if (!(phys.ra > 0.0)) throw std::invalid_argument("choose_proof_parameters: Ra must be positive");
  BoundParams p;
  p.bound_case = c;
  p.user_c = in.user_c;
  const double C = in.user_c;
  const double dh = norms.h_max - norms.h_min;
  p.b = 1.0 / (2.0 * (1.0 + dh));
  const double u0 = in.u0_norm;
  const double base = u0 * u0 + norms.alpha_dot_inf * norms.alpha_dot_inf + norms.kappa_dot_inf * norms.kappa_dot_inf + 1.0;
  const double am = norms.alpha_min;
  switch (c) {
    case BoundCase::interp_kappa_leq_alpha: p.a0 = p.b / (8.0 * C * base); break;
    case BoundCase::interp_general: p.a0 = std::sqrt(am) * p.b / (8.0 * C * base); break;
    case BoundCase::three_sevenths: p.a0 = am * p.b / (8.0 * C * (base + 1.0 / (am * am))); break;
  }
  if (in.a0_override) p.a0 = *in.a0_override;
  const bool three = c == BoundCase::three_sevenths;
  p.a = p.a0 * std::pow(phys.ra, three ? -11.0 / 7.0 : -1.5);
  const double denom = c == BoundCase::interp_kappa_leq_alpha ? 8.0 * C : 4.0 * C;
  p.delta_proof = std::pow(p.a0 * p.b / denom, 1.0 / 6.0) * std::pow(phys.ra, three ? -3.0 / 7.0 : -5.0 / 12.0);
  p.delta = p.delta_proof;
  if (in.delta_override) {
    p.delta = *in.delta_override;
    p.delta_from_proof = false;
  }
  p.big_m = C * p.a * norms.alpha_plus_kappa_w1inf * norms.alpha_plus_kappa_w1inf;
  return p;
}

Theorem1Result evaluate_theorem1(const PhysicalParams& phys, const BoundaryNorms& norms, double user_c, bool ec_pass) {
  Theorem1Result r;
  r.bound = user_c * (std::sqrt(std::max(phys.ra, 0.0)) + norms.kappa_inf);
  r.ra_at_least_one = phys.ra >= 1.0;
  r.ec = ec_pass;
  return r;
}

Theorem2Result evaluate_theorem2(BoundCase c, const PhysicalParams& phys, const BoundaryNorms& norms, double user_c,
                                 double u0_norm, double user_cbar, bool kappa_condition) {
  Theorem2Result r;
  r.bound_case = c;
  const double C = user_c;
  const double am = norms.alpha_min;
  const double w = norms.alpha_plus_kappa_w1inf;
  const double ra = phys.ra, pr = phys.pr;
  const double lin = u0_norm + norms.alpha_dot_inf + norms.kappa_dot_inf + 1.0;
  r.c_half = C / (1.0 + u0_norm * u0_norm);
  r.c_5_12 = C * std::cbrt(lin);
  r.c_3_7 = C * (w * w + std::pow(am, -0.5) + std::pow(am, -1.0 / 6.0) * std::cbrt(lin));
  r.kappa_condition = kappa_condition;
  r.smallness = norms.alpha_plus_kappa_inf <= user_cbar;
  r.alpha_positive = am > 0.0;
  switch (c) {
    case BoundCase::interp_kappa_leq_alpha:
      r.bound = r.c_half * w * w * std::sqrt(ra) + r.c_5_12 * std::pow(ra, 5.0 / 12.0);
      r.pr_regime = pr >= std::pow(am, -1.5) * std::pow(ra, 0.75);
      r.ra_alpha = std::pow(ra, -0.5) <= am;
      break;
    case BoundCase::interp_general:
      r.bound = r.c_half * std::sqrt(am) * w * w * std::sqrt(ra) +
                r.c_5_12 * std::pow(am, -1.0 / 12.0) * std::pow(ra, 5.0 / 12.0);
      r.pr_regime = pr >= std::pow(am, -1.5) * std::pow(ra, 0.75);
      r.ra_alpha = 1.0 / ra <= am;
      break;
    case BoundCase::three_sevenths:
      r.bound = r.c_3_7 * std::pow(ra, 3.0 / 7.0);
      r.pr_regime = pr >= std::pow(ra, 5.0 / 7.0);
      r.ra_alpha = true;
      break;
  }
  return r;
}

QInputs q_inputs_from_averages(const Averages& avg, const MappedGrid& g) {
  QInputs q;
  if (avg.samples == 0) return q;
  q.nu = avg.nu_gradsq.mean;
  q.grad_u_sq = avg.grad_u_sq.mean / g.gamma;
  q.boundary_friction = avg.boundary_friction.mean / g.gamma;
  if (avg.background_samples > 0) {
    q.grad_theta_sq = avg.grad_theta_sq.mean;
    q.theta_u_grad_eta = avg.theta_u_grad_eta.mean;
  }
  if (avg.enstrophy_samples > 0) {
    double sum = 0.0;
    for (const RunningStat& r : avg.enstrophy_terms) sum += r.mean;
    const double sp = avg.ens_t_last - avg.ens_t_first;
    if (sp > 0.0) sum += (avg.ens_transient_last - avg.ens_transient_first) / sp;
    q.enstrophy_a = sum / g.gamma;
  }
  return q;
}

QForm q_form(const QInputs& in, const BackgroundField& bg, const BoundParams& p, const PhysicalParams& phys,
             double height_range) {
  std::vector<std::string> missing;
  auto need = [&](const std::optional<double>& v, const char* name) {
    if (!v) missing.emplace_back(name);
  };
  need(in.nu, "nu");
  need(in.grad_u_sq, "grad_u_sq");
  need(in.boundary_friction, "boundary_friction");
  need(in.grad_theta_sq, "grad_theta_sq");
  need(in.theta_u_grad_eta, "theta_u_grad_eta");
  need(in.enstrophy_a, "enstrophy_a");
  if (!missing.empty()) {
    std::string msg = "q_form: missing ingredients:";
    for (const std::string& m : missing) msg += " " + m;
    throw std::invalid_argument(msg);
  }
  if (!(phys.ra > 0.0)) throw std::invalid_argument("q_form: Ra must be positive");
  QForm q;
  const double ra = phys.ra;
  const double g_eta = bg.grad_eta_sq_avg;
  q.energy_defect = *in.grad_u_sq + *in.boundary_friction - ra * ((1.0 + height_range) * *in.nu - 1.0);
  q.terms = {p.big_m * ra * ra,
             g_eta,
             *in.grad_theta_sq,
             2.0 * *in.theta_u_grad_eta,
             p.b / ra * *in.grad_u_sq,
             p.b / ra * *in.boundary_friction,
             -p.b / ra * q.energy_defect,
             p.a * *in.enstrophy_a};
  q.value = 0.0;
  for (double t : q.terms) q.value += t;
  q.nu_reconstructed = (p.big_m * ra * ra + 2.0 * g_eta - q.value - p.b) / (1.0 - p.b * (1.0 + height_range));
  q.nu_eta_theta = g_eta - *in.grad_theta_sq - 2.0 * *in.theta_u_grad_eta;
  return q;
}

BoundConditions evaluate_conditions(const BoundaryData& bottom, const BoundaryData& top) {
  return {check_condition_ec(bottom, top), check_condition_theorem2(bottom, top, KappaVariant::kappa_leq_alpha),
          check_condition_theorem2(bottom, top, KappaVariant::general)};
}

BoundReport bound_report(const PhysicalParams& phys, const BoundaryNorms& norms, const BoundConditions& cond,
                         const std::vector<BoundCase>& cases, const ProofInputs& in, double user_cbar,
                         std::optional<double> measured_nu) {
  BoundReport r;
  r.phys = phys;
  r.norms = norms;
  r.conditions = cond;
  r.inputs = in;
  r.user_cbar = user_cbar;
  r.measured_nu = measured_nu;
  r.theorem1 = evaluate_theorem1(phys, norms, in.user_c, cond.ec.pass);
  for (BoundCase c : cases) {
    const bool kc = c == BoundCase::interp_kappa_leq_alpha ? cond.kappa_leq_alpha.pass : cond.kappa_general.pass;
    r.theorem2.push_back(evaluate_theorem2(c, phys, norms, in.user_c, in.u0_norm, user_cbar, kc));
    r.params.push_back(phys.ra > 0.0 ? choose_proof_parameters(c, phys, norms, in) : BoundParams{});
    r.q.emplace_back();
  }
  return r;
}

namespace {

const char* yn(bool b) { return b ? "pass" : "FAIL"; }

}  // namespace

std::string BoundReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(8);
  os << "ra = " << phys.ra << "\npr = " << phys.pr << "\nuser_c = " << inputs.user_c << "\nuser_cbar = " << user_cbar
     << "\nu0_norm = " << inputs.u0_norm << "\nn1_conditions = " << norms.n1 << "\nkappa_inf = " << norms.kappa_inf
     << "\nalpha_min = " << norms.alpha_min << "\nalpha_plus_kappa_inf = " << norms.alpha_plus_kappa_inf
     << "\nalpha_plus_kappa_w1inf = " << norms.alpha_plus_kappa_w1inf << "\nalpha_dot_inf = " << norms.alpha_dot_inf
     << "\nkappa_dot_inf = " << norms.kappa_dot_inf << "\nheight_range = " << norms.h_max - norms.h_min << '\n';
  os << "condition_ec = " << yn(conditions.ec.pass) << " (worst margin " << conditions.ec.worst_margin << ")\n";
  os << "condition_kappa_leq_alpha = " << yn(conditions.kappa_leq_alpha.pass) << " (worst margin "
     << conditions.kappa_leq_alpha.worst_margin << ")\n";
  os << "condition_kappa_general = " << yn(conditions.kappa_general.pass) << " (worst margin "
     << conditions.kappa_general.worst_margin << ")\n";
  if (measured_nu) os << "measured_nu = " << *measured_nu << '\n';
  auto bound_line = [&](const std::string& name, double value, bool ok) {
    os << name << " = ";
    if (ok) os << value;
    else os << "(" << value << ", hypotheses not met)";
    if (measured_nu) os << "  margin " << value - *measured_nu;
    os << '\n';
  };
  bound_line("theorem1_bound", theorem1.bound, theorem1.applicable());
  for (std::size_t k = 0; k < theorem2.size(); ++k) {
    const Theorem2Result& t = theorem2[k];
    const BoundParams& p = params[k];
    bound_line(std::string("theorem2_") + bound_case_name(t.bound_case), t.bound, t.applicable());
    os << "  flags: kappa " << yn(t.kappa_condition) << ", smallness " << yn(t.smallness) << ", pr_regime "
       << yn(t.pr_regime) << ", ra_alpha " << yn(t.ra_alpha) << ", alpha_positive " << yn(t.alpha_positive) << '\n';
    os << "  params: a0 " << p.a0 << ", a " << p.a << ", b " << p.b << ", M " << p.big_m << ", delta " << p.delta
       << (p.delta_from_proof ? " (proof)" : " (override; proof value " + std::to_string(p.delta_proof) + ")") << '\n';
    if (q[k]) {
      const QForm& qf = *q[k];
      os << "  Q = " << qf.value << " (" << (qf.value >= 0.0 ? "nonnegative" : "negative") << ")\n";
      for (std::size_t n = 0; n < qf.terms.size(); ++n) os << "    " << QForm::names[n] << " = " << qf.terms[n] << '\n';
      os << "  nu_reconstructed = " << qf.nu_reconstructed << "\n  nu_eta_theta = " << qf.nu_eta_theta << '\n';
    }
  }
  return os.str();
}

std::string BoundReport::csv_header() {
  return "ra,pr,case,applicable,bound_value,measured_nu,margin,delta,a,b,big_m,user_c,"
         "ra_ge_1,ec,kappa_leq_alpha,kappa_general,smallness,pr_regime,ra_alpha,alpha_positive";
}

void BoundReport::write_csv_rows(std::ostream& os, int precision) const {
  auto num = [&](std::ostream& o, double v) {
    if (std::isnan(v)) o << "nan";
    else o << v;
  };
  const double nu = measured_nu ? *measured_nu : NAN;
  const double nan = NAN;
  os.precision(precision);
  auto common_flags = [&](std::ostream& o) {
    o << ',' << (theorem1.ra_at_least_one ? 1 : 0) << ',' << (conditions.ec.pass ? 1 : 0) << ','
      << (conditions.kappa_leq_alpha.pass ? 1 : 0) << ',' << (conditions.kappa_general.pass ? 1 : 0);
  };
  os << phys.ra << ',' << phys.pr << ",theorem1," << (theorem1.applicable() ? 1 : 0) << ',';
  num(os, theorem1.bound);
  os << ',';
  num(os, nu);
  os << ',';
  num(os, theorem1.bound - nu);
  for (int k = 0; k < 4; ++k) {
    os << ',';
    num(os, nan);
  }
  os << ',' << inputs.user_c;
  common_flags(os);
  os << ",1,1,1,1\n";
  for (std::size_t k = 0; k < theorem2.size(); ++k) {
    const Theorem2Result& t = theorem2[k];
    const BoundParams& p = params[k];
    os << phys.ra << ',' << phys.pr << ',' << bound_case_name(t.bound_case) << ',' << (t.applicable() ? 1 : 0) << ',';
    num(os, t.bound);
    os << ',';
    num(os, nu);
    os << ',';
    num(os, t.bound - nu);
    os << ',' << p.delta << ',' << p.a << ',' << p.b << ',' << p.big_m << ',' << inputs.user_c;
    common_flags(os);
    os << ',' << (t.smallness ? 1 : 0) << ',' << (t.pr_regime ? 1 : 0) << ',' << (t.ra_alpha ? 1 : 0) << ','
       << (t.alpha_positive ? 1 : 0) << '\n';
  }
}

double loglog_slope(const std::vector<double>& ra, const std::vector<double>& nu) {
  if (ra.size() != nu.size() || ra.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(ra.size());
  for (std::size_t k = 0; k < ra.size(); ++k) {
    if (!(ra[k] > 0.0) || !(nu[k] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    const double x = std::log(ra[k]), y = std::log(nu[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("loglog_slope: all Ra values coincide");
  return (n * sxy - sx * sy) / den;
}

}  // namespace rbslip
