#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbslip/bounds.hpp"
#include "rbslip/config.hpp"
#include "rbslip/diagnostics.hpp"
#include "rbslip/solver.hpp"

namespace rbslip {

const char* version_string();

struct RunRequest {
  RunConfig config;
  std::optional<std::string> resume;       // checkpoint path
  std::optional<std::string> output_dir;   // overrides config.output.directory
  bool write_files = true;
  bool keep_records = true;
  std::ostream* log = nullptr;
};

/// Post-burn-in background statistics for one strip width.
struct BackgroundStats {
  double delta = 0.0;
  RunningStat grad_theta_sq, theta_u_grad_eta, grad_T_grad_eta;
};

struct RunOutcome {
  bool ok = true;
  std::string failure_stage;  // "config", "setup", "resume", "step", "output"
  std::string message;
  FlowState state;
  std::vector<DiagnosticsRecord> records;
  Averages averages;
  std::vector<BackgroundStats> background;  // one per distinct strip width
  std::optional<BoundReport> bounds;
  std::filesystem::path directory;
  std::vector<std::string> checkpoints;
  long steps = 0, rejected = 0;
};

/// Time-steps the configured problem, writing diagnostics.csv, checkpoints, bounds.csv,
/// summary.txt, averages.csv, config.effective.yaml and provenance.txt. After a resume the
/// averages cover only the resumed segment.
RunOutcome run_simulation(const RunRequest& req);

/// One run per value; each goes to <output>/<key>=<value>. Writes sweep.csv at the top level.
std::vector<RunOutcome> run_sweep(const RunConfig& base, const std::string& key, const std::vector<std::string>& values,
                                  const std::string& output_dir, std::ostream* log);

/// Bound report from a finished run directory (config.effective.yaml + averages.csv).
BoundReport bounds_from_run_directory(const std::filesystem::path& dir);

/// Bound report from geometry and parameters alone (no measured data).
BoundReport bounds_from_config(const RunConfig& c);

/// Bound report from explicit norms; the boundary conditions are taken as stated.
BoundReport bounds_from_norms(const PhysicalParams& phys, const BoundaryNorms& norms, const std::vector<BoundCase>& cases,
                              const ProofInputs& in, double user_cbar, bool ec, bool kappa_leq_alpha,
                              bool kappa_general, std::optional<double> measured_nu);

/// Geometry and boundary-condition summary for a config.
std::string geometry_report(const RunConfig& c);

}  // namespace rbslip
