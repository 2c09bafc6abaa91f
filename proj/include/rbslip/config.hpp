#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbslip/bounds.hpp"
#include "rbslip/geometry.hpp"
#include "rbslip/solver.hpp"

namespace rbslip {

struct GeometryConfig {
  double gamma = 2.0;
  double h_mean = 0.0;
  std::vector<FourierMode> h_modes;
  bool operator==(const GeometryConfig&) const = default;
};

struct AlphaConfig {
  double mean = 1.0;
  std::vector<FourierMode> modes;
  bool operator==(const AlphaConfig&) const = default;
};

struct BoundaryConfig {
  AlphaConfig alpha_bottom, alpha_top;
  bool operator==(const BoundaryConfig&) const = default;
};

struct TimeConfig {
  std::optional<double> dt;  // empty: adaptive from the CFL and explicit-term limits
  double t_end = 1.0;
  double burn_in = 0.2;  // filled with 0.2 t_end when absent
  double sample_interval = 0.01;
  double checkpoint_interval = 0.0;  // 0: final checkpoint only
  double cfl = 0.4;
  double dt_max = 1e-2;
  bool operator==(const TimeConfig&) const = default;
};

struct InitialConfig {
  double temp_amplitude = 0.1;
  std::uint64_t seed = 1;
  int temp_modes = 4;
  std::vector<StreamMode> velocity_modes;
  bool operator==(const InitialConfig&) const = default;
};

struct SolverConfig {
  double theta = 0.5;
  int coupling_sweeps = 0;
  double coupling_tol = 1e-8;
  int pressure_interval = 1;  // pressure every k-th sample, 0 never
  AdvectionForm advection = AdvectionForm::skew_symmetric;
  bool operator==(const SolverConfig&) const = default;
};

struct BoundsConfig {
  std::vector<BoundCase> cases = {BoundCase::interp_kappa_leq_alpha, BoundCase::interp_general,
                                  BoundCase::three_sevenths};
  double user_c = 1.0;
  double user_cbar = 1.0;
  std::optional<double> delta_override;
  double u0_norm = 1.0;
  std::optional<double> a0_override;
  int n1_conditions = 1024;
  bool operator==(const BoundsConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "output";
  int precision = 17;
  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  GeometryConfig geometry;
  BoundaryConfig boundary;
  PhysicalParams physical;
  int n1 = 64, n2 = 65;
  TimeConfig time;
  InitialConfig initial;
  SolverConfig solver;
  BoundsConfig bounds;
  OutputConfig output;
  std::vector<std::string> warnings;  // not part of equality

  bool operator==(const RunConfig& o) const {
    return geometry == o.geometry && boundary == o.boundary && physical == o.physical && n1 == o.n1 &&
           n2 == o.n2 && time == o.time && initial == o.initial && solver == o.solver && bounds == o.bounds &&
           output == o.output;
  }

  HeightProfile profile() const { return {geometry.gamma, geometry.h_modes, geometry.h_mean}; }
  FourierSeries alpha_bottom() const { return {geometry.gamma, boundary.alpha_bottom.mean, boundary.alpha_bottom.modes}; }
  FourierSeries alpha_top() const { return {geometry.gamma, boundary.alpha_top.mean, boundary.alpha_top.modes}; }
  SolverOptions solver_options() const;
  ProofInputs proof_inputs() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the sectioned YAML document; fills defaults, validates, and records warnings.
/// Errors carry "line L, column C" of the offending node when available.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& c);

/// Throws ConfigError naming the first violated rule; appends soft warnings to c.warnings.
void validate_config(RunConfig& c);

/// Sets "section.key" to a YAML scalar or flow sequence and re-validates.
RunConfig with_override(const RunConfig& c, const std::string& dotted_key, const std::string& value);

AdvectionForm parse_advection(const std::string& s);
const char* advection_name(AdvectionForm a);

}  // namespace rbslip
