#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbslip/diagnostics.hpp"
#include "rbslip/geometry.hpp"
#include "rbslip/grid.hpp"
#include "rbslip/solver.hpp"

namespace rbslip {

/// eta(x2): 1 at the bottom wall, 1/2 in the bulk, 0 at the top; linear in strips of width delta.
double eta_profile(double x2, double delta);

struct BackgroundField {
  double delta = 0.0;
  ScalarField eta;
  double grad_eta_sq_avg = 0.0;  // exact strip formula, volume-averaged
  double cells_per_strip = 0.0;
  std::string warning;  // non-empty if the strip is under-resolved
};

BackgroundField build_background(double delta, const MappedGrid& g);

/// <|grad eta|^2> from the sampled eta, edge differences in x2 (exact when delta sits on a node).
double grad_eta_sq_quadrature(const BackgroundField& bg, const MappedGrid& g);

ScalarField theta_field(const FlowState& s, const BackgroundField& bg);

/// <|grad theta|^2>, <theta u.grad eta>, <grad T.grad eta> for one state; the strip integrals
/// use the piecewise linear interpolant in x2.
BackgroundSample background_sample(const FlowState& s, const BackgroundField& bg, const MappedGrid& g);

enum class BoundCase { interp_kappa_leq_alpha, interp_general, three_sevenths };

const char* bound_case_name(BoundCase c);
BoundCase parse_bound_case(const std::string& name);

struct ProofInputs {
  double user_c = 1.0;
  double u0_norm = 1.0;  // stands in for ||u0||_{W^{1,r}}
  std::optional<double> a0_override;
  std::optional<double> delta_override;
};

struct BoundParams {
  BoundCase bound_case = BoundCase::interp_kappa_leq_alpha;
  double a0 = 0.0;
  double a = 0.0;
  double b = 0.0;
  double big_m = 0.0;
  double user_c = 1.0;
  double delta = 0.0;
  double delta_proof = 0.0;  // value from the proof formula
  bool delta_from_proof = true;
};

BoundParams choose_proof_parameters(BoundCase c, const PhysicalParams& phys, const BoundaryNorms& norms,
                                    const ProofInputs& in);

struct Theorem1Result {
  double bound = 0.0;
  bool ra_at_least_one = true;
  bool ec = true;
  bool applicable() const { return ra_at_least_one && ec; }
};

Theorem1Result evaluate_theorem1(const PhysicalParams& phys, const BoundaryNorms& norms, double user_c, bool ec_pass);

struct Theorem2Result {
  BoundCase bound_case = BoundCase::interp_kappa_leq_alpha;
  double bound = 0.0;
  double c_half = 0.0, c_5_12 = 0.0, c_3_7 = 0.0;
  bool kappa_condition = true;
  bool smallness = true;    // ||alpha+kappa||_inf <= Cbar
  bool pr_regime = true;    // Pr >= alpha_min^{-3/2} Ra^{3/4} (cases 1-2) or Pr >= Ra^{5/7} (case 3)
  bool ra_alpha = true;     // Ra^{-1/2} <= alpha_min (case 1), Ra^{-1} <= alpha_min (case 2)
  bool alpha_positive = true;
  bool applicable() const { return kappa_condition && smallness && pr_regime && ra_alpha && alpha_positive; }
};

Theorem2Result evaluate_theorem2(BoundCase c, const PhysicalParams& phys, const BoundaryNorms& norms, double user_c,
                                 double u0_norm, double user_cbar, bool kappa_condition);

/// Averaged ingredients of the quadratic form.
struct QInputs {
  std::optional<double> nu;  // measured Nusselt number used in the energy term
  std::optional<double> grad_u_sq, boundary_friction;
  std::optional<double> grad_theta_sq, theta_u_grad_eta;
  std::optional<double> enstrophy_a;  // sum of the averaged enstrophy-balance terms
};

/// Builds QInputs from recorder averages (all normalized by the domain area).
QInputs q_inputs_from_averages(const Averages& avg, const MappedGrid& g);

struct QForm {
  double value = 0.0;
  std::array<double, 8> terms{};
  static constexpr std::array<const char*, 8> names = {"M_Ra2",          "grad_eta_sq", "grad_theta_sq",
                                                       "theta_u_grad_eta", "b_grad_u_sq", "b_friction",
                                                       "minus_b_energy",  "a_enstrophy"};
  double energy_defect = 0.0;     // the bold b
  double nu_reconstructed = 0.0;  // from (1 - b(1+dh)) Nu + b = M Ra^2 + 2<|grad eta|^2> - Q
  double nu_eta_theta = 0.0;      // <|grad eta|^2> - <|grad theta|^2> - 2<theta u.grad eta>
};

/// Throws std::invalid_argument naming every missing ingredient.
QForm q_form(const QInputs& in, const BackgroundField& bg, const BoundParams& p, const PhysicalParams& phys,
             double height_range);

struct BoundConditions {
  ConditionReport ec, kappa_leq_alpha, kappa_general;
};

BoundConditions evaluate_conditions(const BoundaryData& bottom, const BoundaryData& top);

struct BoundReport {
  PhysicalParams phys;
  BoundaryNorms norms;
  BoundConditions conditions;
  ProofInputs inputs;
  double user_cbar = 1.0;
  std::optional<double> measured_nu;
  Theorem1Result theorem1;
  std::vector<Theorem2Result> theorem2;
  std::vector<BoundParams> params;
  std::vector<std::optional<QForm>> q;

  std::string to_text() const;
  static std::string csv_header();
  /// One row for theorem 1 and one per theorem-2 case.
  void write_csv_rows(std::ostream& os, int precision = 17) const;
};

BoundReport bound_report(const PhysicalParams& phys, const BoundaryNorms& norms, const BoundConditions& cond,
                         const std::vector<BoundCase>& cases, const ProofInputs& in, double user_cbar,
                         std::optional<double> measured_nu);

/// Least-squares slope of log(nu) against log(ra).
double loglog_slope(const std::vector<double>& ra, const std::vector<double>& nu);

}  // namespace rbslip
