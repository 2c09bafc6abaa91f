// Acceptance driver: `acceptance [N ...]` runs the listed criteria (all when none given)
// and prints one "criterion N: PASS|FAIL" line each. Exit status is nonzero on any failure.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "rbslip/bounds.hpp"
#include "rbslip/checkpoint.hpp"
#include "rbslip/config.hpp"
#include "rbslip/geometry.hpp"
#include "rbslip/run.hpp"
#include "rbslip/scaling.hpp"
#include "rbslip/verify.hpp"

using namespace rbslip;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  // records a named check and folds it into the verdict
  void check(const std::string& name, bool ok) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << name << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

void criterion1(Verdict& v) {
  const auto t0 = Clock::now();
  HeightProfile flat;
  flat.gamma = 2.0;
  for (const auto& [name, p] : {std::pair<const char*, HeightProfile>{"flat", flat}, {"rough", rough_fixture()}}) {
    const GeometryIdentities gi = geometry_identities(p, 256);
    v.detail << ' ' << name << ": tau.n=" << gi.tau_dot_n << " |n|-1=" << gi.normal_unit
             << " int_kappa=" << gi.kappa_integral << " antisym=" << gi.kappa_antisym << ';';
    v.check(std::string(name) + " tau.n", gi.tau_dot_n <= 1e-14);
    v.check(std::string(name) + " |n|", gi.normal_unit <= 1e-14);
    v.check(std::string(name) + " int kappa", gi.kappa_integral <= 1e-12);
    v.check(std::string(name) + " antisymmetry", gi.kappa_antisym == 0.0);
  }
  const double el = seconds_since(t0);
  v.detail << " runtime=" << el << "s";
  v.check("runtime < 1 s", el < 1.0);
}

void criterion2(Verdict& v) {
  const auto t0 = Clock::now();
  for (const MmsStudy& m : mms_study(rough_fixture(), {32, 64, 128}, 64)) {
    v.detail << ' ' << m.op << '=' << std::setprecision(4) << m.min_order;
    v.check(m.op, m.min_order >= 1.9);
  }
  const double el = seconds_since(t0);
  v.detail << " runtime=" << el << "s";
  v.check("runtime < 30 s", el < 30.0);
}

void criterion3(Verdict& v) {
  const auto t0 = Clock::now();
  const ConductionCheck c = conduction_check(100.0, 1000, 1e-3, 32, 33);
  const double dev = std::max({std::abs(c.nu_flux - 1), std::abs(c.nu_gradsq - 1), std::abs(c.nu_strip - 1)});
  v.detail << " Ra=100 steps=" << c.steps << " max|Nu-1|=" << dev << " ||u||=" << c.velocity_l2;
  v.check("Nu = 1", dev <= 1e-6);
  v.check("u = 0", c.velocity_l2 <= 1e-8);
  const double el = seconds_since(t0);
  v.detail << " runtime=" << el << "s";
  v.check("runtime < 30 s", el < 30.0);
}

void criterion4(Verdict& v) {
  const auto t0 = Clock::now();
  const DecayFit f = energy_decay_fit(1.0, 1.0, 0.2, 32, 33, 1e-3);
  v.detail << " rate=" << f.rate << " bound_rate=" << f.bound_rate << " window=[" << f.t_fit_begin << ", "
           << f.t_fit_end << "]" << " ec=" << (f.ec ? "holds" : "violated");
  v.check("ec", f.ec);
  v.check("rate", f.rate >= 0.95 * f.bound_rate);
  v.check("monotone", f.monotone);
  const double el = seconds_since(t0);
  v.detail << " runtime=" << el << "s";
  v.check("runtime < 60 s", el < 60.0);
}

// Statistically steady flat fixture shared by criteria 5-8.
const RunOutcome& flat_fixture() {
  static const RunOutcome out = [] {
    RunRequest req;
    req.config = parse_config(R"(
geometry: {gamma: 1}
boundary: {alpha_bottom: 1}
physical: {ra: 1.0e5, pr: 10}
grid: {n1: 128, n2: 129}
time: {dt: auto, t_end: 0.6, burn_in: 0.3, sample_interval: 5.0e-4}
bounds: {delta_override: 0.125}
)");
    req.write_files = false;
    req.keep_records = false;
    const auto t0 = Clock::now();
    RunOutcome o = run_simulation(req);
    std::cerr << "flat fixture: " << seconds_since(t0) << " s, " << o.steps << " steps\n";
    return o;
  }();
  return out;
}

const RunOutcome& rough_run() {
  static const RunOutcome out = [] {
    RunRequest req;
    req.config = parse_config(R"(
geometry: {gamma: 1, h_modes: [[1, 0, 0.1]]}
boundary: {alpha_bottom: 1}
physical: {ra: 1.0e4, pr: 10}
grid: {n1: 64, n2: 65}
time: {dt: auto, t_end: 1.0, burn_in: 0.5, sample_interval: 1.0e-3}
bounds: {delta_override: 0.125}
)");
    req.write_files = false;
    req.keep_records = false;
    const auto t0 = Clock::now();
    RunOutcome o = run_simulation(req);
    std::cerr << "rough fixture: " << seconds_since(t0) << " s, " << o.steps << " steps\n";
    return o;
  }();
  return out;
}

bool fixture_ok(Verdict& v, const RunOutcome& o, const char* name) {
  if (!o.ok) v.detail << ' ' << name << " run failed in " << o.failure_stage << ": " << o.message;
  v.check(std::string(name) + " run", o.ok);
  return o.ok;
}

void criterion5(Verdict& v) {
  const RunOutcome& o = flat_fixture();
  if (!fixture_ok(v, o, "flat")) return;
  const Averages& a = o.averages;
  const double er = a.energy_residual(PhysicalParams{1e5, 10});
  const double sr = a.enstrophy_residual();
  v.detail << " samples=" << a.samples << " energy_residual=" << er << " enstrophy_residual=" << sr;
  v.check("energy balance", std::abs(er) <= 1e-3);
  v.check("enstrophy balance", std::abs(sr) <= 5e-3);
}

void criterion6(Verdict& v) {
  const RunOutcome& o = flat_fixture();
  if (!fixture_ok(v, o, "flat")) return;
  const Averages& a = o.averages;
  const double nu = a.nu_gradsq.mean;
  const double gap = std::abs(a.nu_flux.mean - nu) / nu;
  const double spread = a.nu_strip_spread() / nu;
  v.detail << " nu_flux=" << a.nu_flux.mean << " nu_gradsq=" << nu << " strips=" << a.nu_strip[0].mean << '/'
           << a.nu_strip[1].mean << '/' << a.nu_strip[2].mean << " rel_gap=" << gap << " rel_spread=" << spread;
  v.check("flux vs gradsq", gap <= 0.03);
  v.check("strip spread", spread <= 0.03);
}

void inequalities(Verdict& v, const RunOutcome& o, const char* name, const RunConfig& cfg) {
  const Averages& a = o.averages;
  const HeightProfile p = cfg.profile();
  double hmax = -INFINITY, hmin = INFINITY;
  for (int i = 0; i < 4096; ++i) {
    const double h = evaluate_height(p, p.gamma * i / 4096.0, 0);
    hmax = std::max(hmax, h);
    hmin = std::min(hmin, h);
  }
  const double dh = hmax - hmin;
  const double nu = a.nu_flux.mean;
  const double lower = a.vertical_transport.mean / (1 + dh);
  const double lhs = (a.grad_u_sq.mean + a.boundary_friction.mean) / p.gamma;
  const double rhs = cfg.physical.ra * ((1 + dh) * nu - 1);
  const double slack = (lhs - rhs) / std::max(rhs, 1.0);
  v.detail << ' ' << name << ": nu=" << nu << " transport/(1+dh)=" << lower << " energy lhs=" << lhs
           << " rhs=" << rhs << " rel_violation=" << slack << ';';
  v.check(std::string(name) + " transport inequality", nu >= lower - 1e-3);
  v.check(std::string(name) + " energy inequality", slack <= 1e-3);
}

void criterion7(Verdict& v) {
  const RunOutcome& f = flat_fixture();
  if (fixture_ok(v, f, "flat")) inequalities(v, f, "flat", parse_config("geometry: {gamma: 1}\nphysical: {ra: 1.0e5}\n"));
  const RunOutcome& r = rough_run();
  if (fixture_ok(v, r, "rough"))
    inequalities(v, r, "rough", parse_config("geometry: {gamma: 1, h_modes: [[1, 0, 0.1]]}\nphysical: {ra: 1.0e4}\n"));
}

void criterion8(Verdict& v) {
  const RunOutcome& o = flat_fixture();
  if (!fixture_ok(v, o, "flat")) return;
  const BackgroundStats* bs = nullptr;
  for (const BackgroundStats& b : o.background)
    if (b.delta == 0.125) bs = &b;
  v.check("background samples at delta = 0.125", bs != nullptr && bs->grad_theta_sq.count > 0);
  if (!bs) return;
  HeightProfile flat;
  flat.gamma = 1.0;
  const MappedGrid g(flat, 128, 129);
  const double big_g = build_background(0.125, g).grad_eta_sq_avg;
  const double nu_eta = big_g - bs->grad_theta_sq.mean - 2 * bs->theta_u_grad_eta.mean;
  const double ref = o.averages.nu_gradsq.mean;
  v.detail << " <|grad eta|^2>=" << big_g << " <|grad theta|^2>=" << bs->grad_theta_sq.mean
           << " <theta u.grad eta>=" << bs->theta_u_grad_eta.mean << " nu_eta_theta=" << nu_eta
           << " nu_gradsq=" << ref << " rel_gap=" << std::abs(nu_eta - ref) / ref;
  v.check("background identity", rel_close(nu_eta, ref, 0.05));
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

void criterion9(Verdict& v) {
  auto exact = [&](const std::string& name, double got, double want) {
    const bool ok = std::abs(got - want) <= 1e-12 * std::abs(want);
    if (!ok) v.detail << ' ' << name << ": got " << std::setprecision(17) << got << " want " << want;
    v.check(name, ok);
  };
  BoundaryNorms n;
  n.alpha_min = 1.0;
  n.alpha_plus_kappa_inf = n.alpha_plus_kappa_w1inf = 1.0;
  exact("theorem1 Ra=1e6", evaluate_theorem1({1e6, 10}, n, 1.0, true).bound, 1000.0);
  exact("theorem1 Ra=1", evaluate_theorem1({1.0, 10}, n, 1.0, true).bound, 1.0);
  n.kappa_inf = 0.4 * pi * pi;
  exact("theorem1 kappa", evaluate_theorem1({1e4, 10}, n, 1.0, true).bound, 100.0 + 0.4 * pi * pi);
  n.kappa_inf = 0.0;

  n.alpha_min = 0.5;
  const Theorem2Result c1 = evaluate_theorem2(BoundCase::interp_kappa_leq_alpha, {1e6, 1e6}, n, 1.0, 0.0, 1.0, true);
  exact("theorem2 case 1", c1.bound, 1000.0 + std::pow(10.0, 2.5));
  v.check("case 1 Pr regime at 1e6", c1.pr_regime);
  v.check("case 1 Pr regime fails at 8.9e4",
          !evaluate_theorem2(BoundCase::interp_kappa_leq_alpha, {1e6, 8.9e4}, n, 1, 0, 1, true).pr_regime);
  v.check("case 3 Pr regime at 1.94e4",
          evaluate_theorem2(BoundCase::three_sevenths, {1e6, 1.94e4}, n, 1, 1, 1, true).pr_regime);
  v.check("case 3 Pr regime fails at 1.92e4",
          !evaluate_theorem2(BoundCase::three_sevenths, {1e6, 1.92e4}, n, 1, 1, 1, true).pr_regime);
  BoundaryNorms tiny = n;
  tiny.alpha_min = 1e-3;
  v.check("case 1 Ra-alpha flag", !evaluate_theorem2(BoundCase::interp_kappa_leq_alpha, {1e4, 1e30}, tiny, 1, 1, 1,
                                                      true).ra_alpha);
  v.check("case 2 Ra-alpha flag",
          evaluate_theorem2(BoundCase::interp_general, {1e4, 1e30}, tiny, 1, 1, 1, true).ra_alpha);
  BoundaryNorms big = n;
  big.alpha_plus_kappa_inf = 2.0;
  v.check("smallness flag", !evaluate_theorem2(BoundCase::interp_general, {1e4, 1e30}, big, 1, 1, 1, true).smallness);

  BoundaryNorms unit;
  unit.alpha_min = 1.0;
  unit.alpha_plus_kappa_inf = unit.alpha_plus_kappa_w1inf = 1.0;
  ProofInputs in;
  exact("a0 case 1", choose_proof_parameters(BoundCase::interp_kappa_leq_alpha, {1e6, 1}, unit, in).a0, 1.0 / 32);
  in.a0_override = 1.0;
  const BoundParams d = choose_proof_parameters(BoundCase::interp_kappa_leq_alpha, {1e6, 1}, unit, in);
  exact("delta case 1", d.delta, std::pow(1.0 / 16, 1.0 / 6) * std::pow(1e6, -5.0 / 12));
  exact("b flat", d.b, 0.5);
  exact("M", d.big_m, 1e-9);

  HeightProfile flat;
  const auto [fb, ft] = boundary_frames(flat, 32, FourierSeries{1.0, 1.0, {}});
  const ConditionReport ec = check_condition_ec(fb, ft);
  v.check("ec holds on flat alpha=1", ec.pass);
  exact("ec margin", ec.worst_margin, 2.25);
  const ConditionReport ecf =
      check_condition_ec(constant_wall(Side::bottom, 8, 0.04, 0.2), constant_wall(Side::top, 8, 0.04, -0.2));
  v.check("ec fails for alpha=0.04 kappa=0.2", !ecf.pass);
  const BoundaryData b = constant_wall(Side::bottom, 8, 0.01, 0.03), t = constant_wall(Side::top, 8, 0.01, -0.03);
  v.check("|kappa| <= alpha fails", !check_condition_theorem2(b, t, KappaVariant::kappa_leq_alpha).pass);
  v.check("general kappa condition holds", check_condition_theorem2(b, t, KappaVariant::general).pass);
  v.check("|kappa| <= alpha holds on flat", check_condition_theorem2(fb, ft, KappaVariant::kappa_leq_alpha).pass);
  v.detail << " golden values and flag tables checked";
}

void criterion10(Verdict& v) {
  double worst = 0.0;
  for (double rho : {0.0, 0.25, 0.5, 1.5})
    for (double tr : {2.0, 8.0, 0.25})
      for (double h1 : {100.0, 1000.0}) {
        DimensionalSetup s1, s2;
        s1.height_gap = h1;
        s2.temp_gap = tr;
        s2.height_gap = h1 * ratio_for_target_exponent(rho, tr);
        if (s2.height_gap < 100.0) continue;
        const CurvatureScaling c = curvature_scaling(s1, s2);
        worst = std::max(worst, std::abs(c.kappa_ratio_exact / std::pow(c.ra_ratio, rho) - 1.0));
      }
  v.detail << " worst relative deviation=" << worst;
  v.check("round trip within 10%", worst <= 0.1);
  bool pole = false;
  try {
    (void)ratio_for_target_exponent(2.0 / 3.0, 2.0);
  } catch (const std::domain_error&) {
    pole = true;
  }
  v.check("pole rejected", pole);
}

bool bit_equal(const ScalarField& a, const ScalarField& b) {
  return a.values.size() == b.values.size() &&
         std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0;
}

void criterion11(Verdict& v) {
  const fs::path dir = fs::temp_directory_path() / "rbslip_acceptance_restart";
  fs::remove_all(dir);
  RunRequest full;
  full.config = parse_config(R"(
geometry: {gamma: 1, h_modes: [[1, 0, 0.1]]}
boundary: {alpha_bottom: 2, alpha_top: {mean: 1, modes: [[1, 0.3, 0]]}}
physical: {ra: 5000, pr: 1}
grid: {n1: 16, n2: 17}
time: {dt: auto, t_end: 0.06, burn_in: 0.01, sample_interval: 0.005, checkpoint_interval: 0.03}
bounds: {delta_override: 0.25}
)");
  full.output_dir = (dir / "full").string();
  const RunOutcome a = run_simulation(full);
  v.check("uninterrupted run", a.ok && !a.checkpoints.empty());
  if (!v.pass) return;
  RunRequest resumed = full;
  resumed.output_dir = (dir / "resumed").string();
  resumed.resume = a.checkpoints.front();
  const RunOutcome b = run_simulation(resumed);
  v.check("resumed run", b.ok);
  if (!b.ok) return;
  const bool same = b.state.time == a.state.time && b.state.step == a.state.step &&
                    bit_equal(a.state.omega, b.state.omega) && bit_equal(a.state.psi, b.state.psi) &&
                    bit_equal(a.state.temp, b.state.temp);
  v.detail << " restart from t=" << read_checkpoint(a.checkpoints.front()).state.time << " to t=" << b.state.time
           << ": " << (same ? "bit-identical" : "differs");
  v.check("bit-exact restart", same);

  const std::string once = serialize_config(full.config);
  const RunConfig back = parse_config(once);
  const bool idem = back == full.config && serialize_config(back) == once;
  v.detail << "; config round trip " << (idem ? "idempotent" : "differs");
  v.check("config idempotence", idem);
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<void(Verdict&)>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},   {5, criterion5},   {6, criterion6},
      {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}, {11, criterion11}};
  std::vector<int> which;
  for (int k = 1; k < argc; ++k) which.push_back(std::atoi(argv[k]));
  if (which.empty())
    for (const auto& [k, f] : criteria) which.push_back(k);

  int failed = 0;
  for (int k : which) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::cout << "criterion " << k << ": FAIL unknown criterion\n";
      ++failed;
      continue;
    }
    Verdict v;
    try {
      it->second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " exception: " << e.what();
    }
    std::cout << "criterion " << k << ": " << (v.pass ? "PASS" : "FAIL") << v.detail.str() << std::endl;
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
