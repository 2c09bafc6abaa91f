#pragma once

#include <string>
#include <vector>

#include "rbslip/geometry.hpp"

namespace rbslip {

struct CheckRow {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckRow> rows;
  bool pass() const;
  std::string table() const;
};

/// The 0.1 sin(2 pi y1) wall on a unit-period channel.
HeightProfile rough_fixture();

struct GeometryIdentities {
  double tau_dot_n = 0.0;        // max |tau.n|
  double normal_unit = 0.0;      // max ||n| - 1|
  double kappa_integral = 0.0;   // max over walls |int kappa dS|
  double kappa_antisym = 0.0;    // max |kappa_top + kappa_bottom|
};

GeometryIdentities geometry_identities(const HeightProfile& profile, int n1);

struct MmsStudy {
  std::string op;
  std::vector<int> n2;
  std::vector<double> errors;
  double min_order = 0.0;  // smallest pairwise observed order
};

/// Manufactured smooth solution on the given profile; errors in the max norm.
std::vector<MmsStudy> mms_study(const HeightProfile& profile, const std::vector<int>& n2s, int n1);

struct DecayFit {
  double rate = 0.0;        // fitted -d log ||u||^2 / dt
  double bound_rate = 0.0;  // (1/4) min(1, alpha_min) Pr
  bool monotone = true;     // energy decreased every step
  bool ec = true;
  double t_fit_begin = 0.0, t_fit_end = 0.0;
};

/// Unforced decay from a smooth band-limited stream function, flat walls.
DecayFit energy_decay_fit(double alpha, double pr, double t_end, int n1, int n2, double dt);

struct ConductionCheck {
  double nu_flux = 0.0, nu_gradsq = 0.0, nu_strip = 0.0, vertical_transport = 0.0;
  double velocity_l2 = 0.0;
  long steps = 0;
};

/// u0 = 0 and T0 linear on flat walls, stepped with a fixed dt.
ConductionCheck conduction_check(double ra, long steps, double dt, int n1, int n2);

SuiteResult verify_geometry();
SuiteResult verify_mms();
SuiteResult verify_balances();

/// "geometry", "mms" or "balances"; throws on an unknown name.
SuiteResult run_verify_suite(const std::string& name);

}  // namespace rbslip
