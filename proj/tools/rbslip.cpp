#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rbslip/bounds.hpp"
#include "rbslip/config.hpp"
#include "rbslip/run.hpp"
#include "rbslip/scaling.hpp"
#include "rbslip/verify.hpp"

using namespace rbslip;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

int cmd_simulate(const std::string& config, const std::string& output, const std::string& resume,
                 const std::string& sweep) {
  RunConfig cfg = load_config(config);
  if (!sweep.empty()) {
    const auto eq = sweep.find('=');
    if (eq == std::string::npos) throw ConfigError("--sweep expects KEY=v1,v2,...");
    const auto values = split(sweep.substr(eq + 1), ',');
    if (values.empty()) throw ConfigError("--sweep lists no values");
    const auto outs = run_sweep(cfg, sweep.substr(0, eq), values, output.empty() ? cfg.output.directory : output,
                                &std::cerr);
    int bad = 0;
    for (const RunOutcome& o : outs)
      if (!o.ok) ++bad;
    return bad ? 1 : 0;
  }
  RunRequest req;
  req.config = cfg;
  if (!output.empty()) req.output_dir = output;
  if (!resume.empty()) req.resume = resume;
  req.keep_records = false;
  req.log = &std::cerr;
  const RunOutcome o = run_simulation(req);
  if (!o.ok) {
    std::cerr << "simulate failed in stage '" << o.failure_stage << "': " << o.message << '\n';
    return 1;
  }
  std::cout << "output = " << o.directory.string() << "\nsteps = " << o.steps << "\naveraged_samples = "
            << o.averages.samples << '\n';
  if (o.averages.samples > 0) std::cout << "nu_flux = " << o.averages.nu_flux.mean << '\n';
  return 0;
}

struct NormFlags {
  double ra = NAN, pr = 10.0;
  double kappa_inf = 0.0, alpha_min = 1.0, apk_inf = NAN, apk_w1 = NAN, alpha_dot = 0.0, kappa_dot = 0.0;
  double height_range = 0.0;
  double c = 1.0, cbar = 1.0, u0 = 1.0;
  double measured_nu = NAN;
  std::string cases = "interp_kappa_leq_alpha,interp_general,three_sevenths";
  bool ec = true, kla = true, kg = true;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rayleigh-Benard convection between rough Navier-slip walls"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  std::string config, output, resume, sweep, run_dir, suite = "all", csv_path;
  auto* sim = app.add_subcommand("simulate", "time-step a configured problem");
  sim->add_option("--config", config, "YAML config")->required()->check(CLI::ExistingFile);
  sim->add_option("--output", output, "output directory (overrides output.directory)");
  sim->add_option("--resume", resume, "checkpoint to continue from")->check(CLI::ExistingFile);
  sim->add_option("--sweep", sweep, "KEY=v1,v2,... one run per value, e.g. physical.ra=1e4,1e5");

  auto* ver = app.add_subcommand("verify", "run a property suite");
  ver->add_option("suite", suite, "geometry, mms, balances or all")
      ->check(CLI::IsMember({"geometry", "mms", "balances", "all"}));

  NormFlags nf;
  auto* bnd = app.add_subcommand("bounds", "evaluate the Nusselt bounds");
  auto* bsrc = bnd->add_option_group("source");
  bsrc->add_option("--run", run_dir, "finished run directory")->check(CLI::ExistingDirectory);
  bsrc->add_option("--config", config, "config: geometry and parameters only")->check(CLI::ExistingFile);
  bsrc->add_option("--ra", nf.ra, "explicit-norm mode: Rayleigh number");
  bsrc->require_option(1);
  bnd->add_option("--pr", nf.pr, "Prandtl number");
  bnd->add_option("--kappa-inf", nf.kappa_inf, "||kappa||_inf");
  bnd->add_option("--alpha-min", nf.alpha_min, "essential infimum of alpha");
  bnd->add_option("--alpha-plus-kappa-inf", nf.apk_inf, "||alpha + kappa||_inf (default alpha_min + kappa_inf)");
  bnd->add_option("--alpha-plus-kappa-w1inf", nf.apk_w1, "W^{1,inf} norm of alpha + kappa (default the inf norm)");
  bnd->add_option("--alpha-dot-inf", nf.alpha_dot, "||alpha'||_inf");
  bnd->add_option("--kappa-dot-inf", nf.kappa_dot, "||kappa'||_inf");
  bnd->add_option("--height-range", nf.height_range, "max h - min h");
  bnd->add_option("--c", nf.c, "user constant C");
  bnd->add_option("--cbar", nf.cbar, "smallness constant");
  bnd->add_option("--u0-norm", nf.u0, "initial velocity norm");
  bnd->add_option("--measured-nu", nf.measured_nu, "measured Nusselt number");
  bnd->add_option("--cases", nf.cases, "comma separated theorem-2 cases");
  bnd->add_flag("!--no-ec", nf.ec, "state that condition (ec) fails");
  bnd->add_flag("!--no-kappa-leq-alpha", nf.kla, "state that |kappa| <= alpha fails");
  bnd->add_flag("!--no-kappa-general", nf.kg, "state that the general kappa condition fails");
  bnd->add_option("--csv", csv_path, "also write the bounds CSV here");

  DimensionalSetup s1;
  std::optional<double> h2, t2;
  double rho = 0.0;
  auto* sc = app.add_subcommand("scaling", "nondimensional numbers and curvature scaling");
  sc->add_option("--height", s1.height_gap, "H of setup 1");
  sc->add_option("--temp-gap", s1.temp_gap, "delta T of setup 1");
  sc->add_option("--viscosity", s1.viscosity, "nu");
  sc->add_option("--diffusivity", s1.thermal_diffusivity, "thermal diffusivity");
  sc->add_option("--expansion", s1.expansion_coeff, "thermal expansion coefficient");
  sc->add_option("--gravity", s1.gravity, "g");
  sc->add_option("--density", s1.density_ref, "reference density");
  sc->add_option("--height-2", h2, "H of setup 2 (default: from rho)");
  sc->add_option("--temp-gap-2", t2, "delta T of setup 2 (default: setup 1)");
  sc->add_option("--rho", rho, "target exponent: kappa-hat ratio = Ra ratio^rho");

  auto* geo = app.add_subcommand("geometry-report", "wall geometry, norms and conditions");
  geo->add_option("--config", config, "YAML config")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(config, output, resume, sweep);

    if (*ver) {
      const std::vector<std::string> suites =
          suite == "all" ? std::vector<std::string>{"geometry", "mms", "balances"} : std::vector<std::string>{suite};
      bool ok = true;
      for (const std::string& name : suites) {
        const SuiteResult r = run_verify_suite(name);
        std::cout << r.table() << '\n';
        ok = ok && r.pass();
      }
      return ok ? 0 : 1;
    }

    if (*bnd) {
      BoundReport rep;
      if (!run_dir.empty()) {
        rep = bounds_from_run_directory(run_dir);
      } else if (!config.empty()) {
        rep = bounds_from_config(load_config(config));
      } else {
        BoundaryNorms n;
        n.kappa_inf = nf.kappa_inf;
        n.alpha_min = nf.alpha_min;
        n.alpha_plus_kappa_inf = std::isnan(nf.apk_inf) ? nf.alpha_min + nf.kappa_inf : nf.apk_inf;
        n.alpha_plus_kappa_w1inf = std::isnan(nf.apk_w1) ? n.alpha_plus_kappa_inf : nf.apk_w1;
        n.alpha_dot_inf = nf.alpha_dot;
        n.kappa_dot_inf = nf.kappa_dot;
        n.h_min = 0.0;
        n.h_max = nf.height_range;
        std::vector<BoundCase> cases;
        for (const std::string& c : split(nf.cases, ',')) cases.push_back(parse_bound_case(c));
        ProofInputs in;
        in.user_c = nf.c;
        in.u0_norm = nf.u0;
        std::optional<double> nu;
        if (!std::isnan(nf.measured_nu)) nu = nf.measured_nu;
        rep = bounds_from_norms({nf.ra, nf.pr}, n, cases, in, nf.cbar, nf.ec, nf.kla, nf.kg, nu);
      }
      std::cout << rep.to_text();
      if (!csv_path.empty()) {
        std::ofstream o(csv_path);
        o << BoundReport::csv_header() << '\n';
        rep.write_csv_rows(o);
      }
      return 0;
    }

    if (*sc) {
      DimensionalSetup s2 = s1;
      if (t2) s2.temp_gap = *t2;
      if (h2) {
        s2.height_gap = *h2;
      } else {
        try {
          s2.height_gap = s1.height_gap * ratio_for_target_exponent(rho, s2.temp_gap / s1.temp_gap);
        } catch (const std::domain_error& e) {
          std::cerr << "scaling: " << e.what() << '\n';
          return 1;
        }
      }
      std::cout << scaling_report(s1, s2, rho);
      return 0;
    }

    if (*geo) {
      std::cout << geometry_report(load_config(config));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
