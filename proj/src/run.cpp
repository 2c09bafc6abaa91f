#include "rbslip/run.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "rbslip/checkpoint.hpp"
#include "rbslip/operators.hpp"

namespace fs = std::filesystem;

namespace rbslip {

const char* version_string() { return "rbslip " RBSLIP_VERSION; }

namespace {

using Table = std::map<std::string, double>;

struct Setup {
  HeightProfile profile;
  MappedGrid grid;
  BoundaryData bottom, top;
  BoundaryNorms norms;
  BoundConditions conditions;

  explicit Setup(const RunConfig& c) : profile(c.profile()), grid(profile, c.n1, c.n2) {
    std::tie(bottom, top) = boundary_frames(profile, c.n1, c.alpha_bottom(), c.alpha_top());
    const auto [cb, ct] = boundary_frames(profile, c.bounds.n1_conditions, c.alpha_bottom(), c.alpha_top());
    norms = boundary_norms(profile, cb, ct);
    conditions = evaluate_conditions(cb, ct);
  }
};

/// Strip widths to sample: the override, or each case's proof value.
std::vector<double> background_deltas(const RunConfig& c, const BoundaryNorms& norms) {
  std::vector<double> out;
  if (c.bounds.delta_override) return {*c.bounds.delta_override};
  if (!(c.physical.ra > 0.0)) return out;
  for (BoundCase bc : c.bounds.cases) {
    const double d = choose_proof_parameters(bc, c.physical, norms, c.proof_inputs()).delta;
    if (d > 0.0 && d <= 0.5 && std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  }
  return out;
}

Table averages_table(const Averages& a, const std::vector<BackgroundStats>& bgs, const MappedGrid& g,
                     const PhysicalParams& p) {
  Table t;
  t["samples"] = static_cast<double>(a.samples);
  if (a.samples == 0) return t;
  t["t_begin"] = a.t_begin;
  t["t_end"] = a.t_end;
  t["nu_flux"] = a.nu_flux.mean;
  t["nu_gradsq"] = a.nu_gradsq.mean;
  for (int q = 0; q < 3; ++q) t["nu_strip_" + std::to_string(static_cast<int>(kStripLevels[q] * 100))] = a.nu_strip[q].mean;
  t["vertical_transport"] = a.vertical_transport.mean;
  t["energy"] = a.energy.mean;
  t["grad_u_sq"] = a.grad_u_sq.mean;
  t["boundary_friction"] = a.boundary_friction.mean;
  t["buoyancy_flux"] = a.buoyancy_flux.mean;
  t["enstrophy"] = a.enstrophy.mean;
  t["energy_residual"] = a.energy_residual(p);
  t["temp_min"] = a.temp_min.min;
  t["temp_max"] = a.temp_max.max;
  for (int q = 0; q < 3; ++q) t["omega_l" + std::to_string(2 << q) + "_max"] = a.omega_lp[q].max;
  const QInputs qi = q_inputs_from_averages(a, g);
  t["q_nu"] = *qi.nu;
  t["q_grad_u_sq"] = *qi.grad_u_sq;
  t["q_boundary_friction"] = *qi.boundary_friction;
  if (a.enstrophy_samples > 0) {
    t["enstrophy_samples"] = static_cast<double>(a.enstrophy_samples);
    t["enstrophy_residual"] = a.enstrophy_residual();
    for (int q = 0; q < 5; ++q) t[std::string("enstrophy_") + kEnstrophyTermNames[q]] = a.enstrophy_terms[q].mean;
    t["q_enstrophy_a"] = *qi.enstrophy_a;
  }
  for (std::size_t k = 0; k < bgs.size(); ++k) {
    if (bgs[k].grad_theta_sq.count == 0) continue;
    const std::string pre = "bg" + std::to_string(k) + "_";
    t[pre + "delta"] = bgs[k].delta;
    t[pre + "grad_theta_sq"] = bgs[k].grad_theta_sq.mean;
    t[pre + "theta_u_grad_eta"] = bgs[k].theta_u_grad_eta.mean;
    t[pre + "grad_T_grad_eta"] = bgs[k].grad_T_grad_eta.mean;
  }
  return t;
}

std::optional<double> lookup(const Table& t, const std::string& k) {
  auto it = t.find(k);
  if (it == t.end()) return std::nullopt;
  return it->second;
}

/// Theorem report plus, where the averaged data allow it, the quadratic form for each case.
BoundReport assemble_report(const RunConfig& c, const Setup& s, const Table& t, std::vector<std::string>* notes) {
  BoundReport r = bound_report(c.physical, s.norms, s.conditions, c.bounds.cases, c.proof_inputs(),
                               c.bounds.user_cbar, lookup(t, "nu_flux"));
  if (!(c.physical.ra > 0.0) || !lookup(t, "nu_flux")) return r;
  const double dh = s.norms.h_max - s.norms.h_min;
  for (std::size_t k = 0; k < r.params.size(); ++k) {
    const BoundParams& p = r.params[k];
    QInputs in;
    in.nu = lookup(t, "q_nu");
    in.grad_u_sq = lookup(t, "q_grad_u_sq");
    in.boundary_friction = lookup(t, "q_boundary_friction");
    in.enstrophy_a = lookup(t, "q_enstrophy_a");
    for (int b = 0;; ++b) {
      const auto d = lookup(t, "bg" + std::to_string(b) + "_delta");
      if (!d) break;
      if (*d == p.delta) {
        in.grad_theta_sq = lookup(t, "bg" + std::to_string(b) + "_grad_theta_sq");
        in.theta_u_grad_eta = lookup(t, "bg" + std::to_string(b) + "_theta_u_grad_eta");
      }
    }
    try {
      const BackgroundField bg = build_background(p.delta, s.grid);
      r.q[k] = q_form(in, bg, p, c.physical, dh);
    } catch (const std::invalid_argument& e) {
      if (notes) notes->push_back(std::string(bound_case_name(p.bound_case)) + ": " + e.what());
    }
  }
  return r;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream o(p);
  if (!o) throw std::runtime_error("cannot write " + p.string());
  o << text;
}

Table read_table(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("run directory is missing " + p.filename().string());
  Table t;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    t[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  return t;
}

std::string table_csv(const Table& t, int precision) {
  std::ostringstream os;
  os.precision(precision);
  os << "key,value\n";
  for (const auto& [k, v] : t) os << k << ',' << v << '\n';
  return os.str();
}

bool finite_state(const FlowState& s) {
  return std::isfinite(max_abs(s.omega)) && std::isfinite(max_abs(s.temp)) && std::isfinite(max_abs(s.psi));
}

std::string checkpoint_mismatch(const CheckpointHeader& h, const RunConfig& c) {
  if (h.n1 != c.n1 || h.n2 != c.n2) return "grid dimensions";
  if (h.gamma != c.geometry.gamma) return "gamma";
  if (!(h.params == c.physical)) return "physical parameters";
  if (!(h.profile == c.profile())) return "height profile";
  if (!(h.alpha_bottom == c.alpha_bottom()) || !(h.alpha_top == c.alpha_top())) return "friction coefficients";
  return "";
}

}  // namespace

RunOutcome run_simulation(const RunRequest& req) {
  RunOutcome out;
  const RunConfig& cfg = req.config;
  std::ostream* log = req.log;
  auto failed = [&](const std::string& stage, const std::string& msg) {
    out.ok = false;
    out.failure_stage = stage;
    out.message = msg;
    if (log) *log << "error [" << stage << "]: " << msg << '\n';
    return out;
  };

  std::unique_ptr<Setup> su;
  std::unique_ptr<Stepper> st;
  try {
    su = std::make_unique<Setup>(cfg);
    st = std::make_unique<Stepper>(su->grid, su->bottom, su->top, cfg.physical, cfg.solver_options());
  } catch (const std::exception& e) {
    return failed("setup", e.what());
  }
  const MappedGrid& g = su->grid;

  out.directory = req.output_dir ? fs::path(*req.output_dir) : fs::path(cfg.output.directory);
  std::ofstream csv;
  if (req.write_files) {
    try {
      fs::create_directories(out.directory / "checkpoints");
      write_text(out.directory / "config.effective.yaml", serialize_config(cfg));
      std::ostringstream pv;
      pv << "version = " << version_string() << '\n' << g.summary();
      pv << "ra = " << std::setprecision(17) << cfg.physical.ra << "\npr = " << cfg.physical.pr << '\n';
      if (req.resume) pv << "resumed_from = " << *req.resume << '\n';
      for (const std::string& w : cfg.warnings) pv << "warning = " << w << '\n';
      write_text(out.directory / "provenance.txt", pv.str());
    } catch (const std::exception& e) {
      return failed("output", e.what());
    }
  }
  for (const std::string& w : cfg.warnings)
    if (log) *log << "warning: " << w << '\n';

  const double eps = 1e-9 * cfg.time.sample_interval;
  FlowState s;
  DriverClock clock;
  if (req.resume) {
    try {
      Checkpoint ck = read_checkpoint(*req.resume);
      const std::string bad = checkpoint_mismatch(ck.header, cfg);
      if (!bad.empty()) return failed("resume", "checkpoint " + bad + " differ from the config");
      s = std::move(ck.state);
      st->recover_velocity(s);
      clock = ck.clock;
    } catch (const std::exception& e) {
      return failed("resume", e.what());
    }
  } else {
    try {
      s = st->initial_state(
          initial_temperature(g, cfg.initial.temp_amplitude, cfg.initial.seed, cfg.initial.temp_modes),
          stream_function_from_modes(g, cfg.initial.velocity_modes));
    } catch (const std::exception& e) {
      return failed("setup", e.what());
    }
    clock.dt_next = cfg.time.dt ? *cfg.time.dt
                                : 0.1 * std::min({cfg.time.dt_max, st->explicit_dt_limit(), st->cfl_dt(s)});
    clock.next_sample = 0.0;
    clock.next_checkpoint = cfg.time.checkpoint_interval > 0.0 ? cfg.time.checkpoint_interval : INFINITY;
  }

  Recorder rec(cfg.physical, cfg.time.burn_in, cfg.output.precision);
  if (req.write_files) {
    const fs::path p = out.directory / "diagnostics.csv";
    const bool append = req.resume && fs::exists(p);
    csv.open(p, append ? std::ios::app : std::ios::trunc);
    if (!csv) return failed("output", "cannot write " + p.string());
    rec.set_csv(&csv, !append);
  }

  std::vector<BackgroundField> bgs;
  try {
    for (double d : background_deltas(cfg, su->norms)) {
      bgs.push_back(build_background(d, g));
      out.background.push_back({d, {}, {}, {}});
    }
  } catch (const std::exception& e) {
    return failed("setup", e.what());
  }

  const CheckpointHeader header{cfg.n1,        cfg.n2, cfg.geometry.gamma, cfg.physical, 0.0, su->profile,
                                cfg.alpha_bottom(), cfg.alpha_top()};
  auto checkpoint = [&](const std::string& name) {
    if (!req.write_files) return;
    const std::string path = (out.directory / "checkpoints" / name).string();
    CheckpointHeader h = header;
    h.time = s.time;
    write_checkpoint(path, h, s, clock);
    out.checkpoints.push_back(path);
  };

  long n_samples = 0;
  auto sample = [&] {
    DiagnosticsRecord r;
    const int pi = cfg.solver.pressure_interval;
    if (pi > 0 && n_samples % pi == 0) {
      PressureStats ps;
      const ScalarField p = st->recover_pressure(s, &ps);
      r = sample_diagnostics(s, g, su->bottom, su->top, cfg.physical, &p, ps.compatibility_defect_relative);
    } else {
      r = sample_diagnostics(s, g, su->bottom, su->top, cfg.physical);
    }
    for (std::size_t k = 0; k < bgs.size(); ++k) {
      const BackgroundSample b = background_sample(s, bgs[k], g);
      if (k == 0) r.background = b;
      if (s.time >= cfg.time.burn_in) {
        out.background[k].grad_theta_sq.add(b.grad_theta_sq);
        out.background[k].theta_u_grad_eta.add(b.theta_u_grad_eta);
        out.background[k].grad_T_grad_eta.add(b.grad_T_grad_eta);
      }
    }
    rec.add(std::move(r));
    ++n_samples;
  };

  const double t_end = cfg.time.t_end;
  try {
    while (true) {
      if (s.time >= clock.next_sample - eps) {
        sample();
        while (clock.next_sample <= s.time + eps) clock.next_sample += cfg.time.sample_interval;
      }
      if (s.time >= clock.next_checkpoint - eps) {
        while (clock.next_checkpoint <= s.time + eps) clock.next_checkpoint += cfg.time.checkpoint_interval;
        std::ostringstream name;
        name << "ckpt_" << std::setw(9) << std::setfill('0') << s.step << ".rbns";
        checkpoint(name.str());
      }
      if (s.time >= t_end - eps) break;

      const double cand = cfg.time.dt ? *cfg.time.dt
                                      : std::min({clock.dt_next * 1.2, st->cfl_dt(s), st->explicit_dt_limit(),
                                                  cfg.time.dt_max});
      const double dt = std::min({cand, clock.next_sample - s.time, t_end - s.time});
      const StepResult sr = st->step(s, dt);
      if (!sr.accepted) {
        ++out.rejected;
        if (cfg.time.dt)
          return failed("step", "fixed dt violates the CFL limit at t = " + std::to_string(s.time) +
                                    " (suggested dt " + std::to_string(sr.suggested_dt) + ")");
        clock.dt_next = sr.suggested_dt / 1.2;
        continue;
      }
      ++out.steps;
      clock.dt_next = cand;
      if (!finite_state(s)) {
        std::string last = out.checkpoints.empty() ? "none" : out.checkpoints.back();
        rec.flush();
        out.records = rec.records();
        return failed("step", "non-finite state at t = " + std::to_string(s.time) + "; last checkpoint: " + last);
      }
      if (log && out.steps % 2000 == 0)
        *log << "t = " << s.time << "  dt = " << dt << "  step " << s.step << '\n';
    }
    rec.flush();
    checkpoint("final.rbns");
  } catch (const SolverError& e) {
    return failed("step", e.what());
  } catch (const std::exception& e) {
    return failed("step", e.what());
  }

  out.averages = rec.averages();
  const Table table = averages_table(out.averages, out.background, g, cfg.physical);
  std::vector<std::string> notes;
  out.bounds = assemble_report(cfg, *su, table, &notes);
  if (req.write_files) {
    try {
      write_text(out.directory / "averages.csv", table_csv(table, 17));
      std::ofstream b(out.directory / "bounds.csv");
      b << BoundReport::csv_header() << '\n';
      out.bounds->write_csv_rows(b, cfg.output.precision);
      std::ostringstream sm;
      sm << std::setprecision(10) << "t_end = " << s.time << "\nsteps = " << out.steps << "\nrejected = " << out.rejected
         << "\naveraged_samples = " << out.averages.samples << "\naverage_window = [" << out.averages.t_begin << ", "
         << out.averages.t_end << "]\n";
      if (req.resume) sm << "note = averages cover only the resumed segment\n";
      for (const auto& [k, v] : table) sm << "avg_" << k << " = " << v << '\n';
      sm << out.bounds->to_text();
      for (const std::string& n : notes) sm << "q_form_unavailable = " << n << '\n';
      write_text(out.directory / "summary.txt", sm.str());
    } catch (const std::exception& e) {
      return failed("output", e.what());
    }
  }
  if (req.keep_records) out.records = rec.records();
  out.state = std::move(s);
  return out;
}

std::vector<RunOutcome> run_sweep(const RunConfig& base, const std::string& key, const std::vector<std::string>& values,
                                  const std::string& output_dir, std::ostream* log) {
  std::vector<RunOutcome> outs;
  fs::create_directories(output_dir);
  std::ofstream sw(fs::path(output_dir) / "sweep.csv");
  sw.precision(17);
  sw << "key,value,ok,ra,pr,nu_flux,nu_gradsq,vertical_transport,theorem1_bound\n";
  std::vector<double> ra, nu;
  for (const std::string& v : values) {
    RunRequest r;
    r.config = with_override(base, key, v);
    r.output_dir = (fs::path(output_dir) / (key + "=" + v)).string();
    r.keep_records = false;
    r.log = log;
    if (log) *log << "sweep: " << key << " = " << v << '\n';
    RunOutcome o = run_simulation(r);
    sw << key << ',' << v << ',' << (o.ok ? 1 : 0) << ',' << r.config.physical.ra << ',' << r.config.physical.pr;
    if (o.ok && o.averages.samples > 0) {
      sw << ',' << o.averages.nu_flux.mean << ',' << o.averages.nu_gradsq.mean << ','
         << o.averages.vertical_transport.mean << ',' << o.bounds->theorem1.bound << '\n';
      if (r.config.physical.ra > 0.0 && o.averages.nu_flux.mean > 0.0) {
        ra.push_back(r.config.physical.ra);
        nu.push_back(o.averages.nu_flux.mean);
      }
    } else {
      sw << ",nan,nan,nan,nan\n";
    }
    outs.push_back(std::move(o));
  }
  if (key == "physical.ra" && ra.size() >= 2) {
    const double slope = loglog_slope(ra, nu);
    write_text(fs::path(output_dir) / "sweep_slope.txt", "loglog_slope_nu_vs_ra = " + std::to_string(slope) + "\n");
    if (log) *log << "log-log slope of nu against ra: " << slope << '\n';
  }
  return outs;
}

BoundReport bounds_from_run_directory(const fs::path& dir) {
  const fs::path cp = dir / "config.effective.yaml";
  if (!fs::exists(cp)) throw std::runtime_error("run directory is missing config.effective.yaml");
  const RunConfig c = load_config(cp.string());
  const Table t = read_table(dir / "averages.csv");
  if (!lookup(t, "nu_flux")) throw std::runtime_error("averages.csv has no averaged samples (run shorter than burn-in?)");
  const Setup s(c);
  return assemble_report(c, s, t, nullptr);
}

BoundReport bounds_from_config(const RunConfig& c) {
  const Setup s(c);
  return assemble_report(c, s, {}, nullptr);
}

BoundReport bounds_from_norms(const PhysicalParams& phys, const BoundaryNorms& norms, const std::vector<BoundCase>& cases,
                              const ProofInputs& in, double user_cbar, bool ec, bool kappa_leq_alpha,
                              bool kappa_general, std::optional<double> measured_nu) {
  BoundConditions cond;
  cond.ec.name = "ec (stated)";
  cond.ec.pass = ec;
  cond.kappa_leq_alpha.name = "kappa_leq_alpha (stated)";
  cond.kappa_leq_alpha.pass = kappa_leq_alpha;
  cond.kappa_general.name = "kappa_general (stated)";
  cond.kappa_general.pass = kappa_general;
  return bound_report(phys, norms, cond, cases, in, user_cbar, measured_nu);
}

std::string geometry_report(const RunConfig& c) {
  const Setup s(c);
  std::ostringstream os;
  os << std::setprecision(12) << "version = " << version_string() << '\n' << s.grid.summary();
  const BoundaryNorms& n = s.norms;
  os << "kappa_inf = " << n.kappa_inf << "\nalpha_min = " << n.alpha_min
     << "\nalpha_plus_kappa_inf = " << n.alpha_plus_kappa_inf << "\nalpha_plus_kappa_w1inf = " << n.alpha_plus_kappa_w1inf
     << "\nalpha_dot_inf = " << n.alpha_dot_inf << "\nkappa_dot_inf = " << n.kappa_dot_inf
     << "\nheight_range = " << n.h_max - n.h_min << '\n';
  os << s.conditions.ec.to_text() << s.conditions.kappa_leq_alpha.to_text() << s.conditions.kappa_general.to_text();
  return os.str();
}

}  // namespace rbslip
