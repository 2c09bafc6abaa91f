#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbslip/geometry.hpp"
#include "rbslip/grid.hpp"
#include "rbslip/solver.hpp"

namespace rbslip {

/// Boundary heat flux (1/Gamma) int_{bottom} n.grad T dS.
double nusselt_flux(const FlowState& s, const MappedGrid& g);
/// (1/Gamma) int |grad T|^2.
double nusselt_gradsq(const FlowState& s, const MappedGrid& g);
/// (1/Gamma) int_{gamma(x2)} (u T - grad T).n_top dS.
double nusselt_strip(const FlowState& s, const MappedGrid& g, double x2);
/// (1/Gamma) int (u2 - d2) T over the domain.
double vertical_transport(const FlowState& s, const MappedGrid& g);

struct EnergyTerms {
  double energy = 0.0;             // ||u||^2
  double grad_u_sq = 0.0;          // ||grad u||^2
  double boundary_friction = 0.0;  // int_{walls} (2 alpha + kappa) u_tau^2
  double buoyancy_flux = 0.0;      // Ra int T u2
  double enstrophy = 0.0;          // ||omega||^2
  double kappa_u_tau_sq = 0.0;     // int_{walls} kappa u_tau^2
};

EnergyTerms energy_terms(const FlowState& s, const MappedGrid& g, const BoundaryData& bottom,
                         const BoundaryData& top, const PhysicalParams& params);

/// LHS - RHS of the energy balance, scaled by max(|buoyancy|, grad_u_sq, 1).
double energy_balance_residual(double d_energy_dt, const EnergyTerms& e, const PhysicalParams& params);

struct EnstrophyTerms {
  double grad_omega_sq = 0.0;  // int |grad omega|^2
  double wall_pressure = 0.0;  // 2 int_{walls} (alpha+kappa) u.grad p
  double buoyancy = 0.0;       // -Ra int omega d1 T
  double wall_inertia = 0.0;   // (2/Pr) int_{walls} (alpha+kappa) u.(u.grad)u
  double wall_gravity = 0.0;   // -2 Ra int_{bottom} (alpha+kappa) u_tau n1
  // d/dt of these gives the transient part
  double omega_sq_half_over_pr = 0.0;    // ||omega||^2 / (2 Pr)
  double wall_slip_energy_over_pr = 0.0;  // (1/Pr) int_{walls} (alpha+kappa) u_tau^2
  // wall pressure term rewritten by parts; agrees with wall_pressure up to discretization
  double wall_pressure_by_parts = 0.0;
  double pressure_defect = 0.0;

  std::array<double, 5> values() const { return {grad_omega_sq, wall_pressure, buoyancy, wall_inertia, wall_gravity}; }
  double sum() const { return grad_omega_sq + wall_pressure + buoyancy + wall_inertia + wall_gravity; }
  double max_magnitude() const;
};

inline constexpr std::array<const char*, 5> kEnstrophyTermNames = {"grad_omega_sq", "wall_pressure", "buoyancy",
                                                                   "wall_inertia", "wall_gravity"};

EnstrophyTerms enstrophy_terms(const FlowState& s, const ScalarField& pressure, const MappedGrid& g,
                               const BoundaryData& bottom, const BoundaryData& top, const PhysicalParams& params);

/// Background-field ingredients for one sample (filled by the bounds module).
struct BackgroundSample {
  double grad_theta_sq = 0.0;      // <|grad theta|^2>
  double theta_u_grad_eta = 0.0;   // <theta u.grad eta>
  double grad_T_grad_eta = 0.0;    // <grad T . grad eta>
};

struct DiagnosticsRecord {
  double time = 0.0;
  double nu_flux = 0.0;
  double nu_gradsq = 0.0;  // instantaneous; the recorder averages it
  std::array<double, 3> nu_strip{};
  double vertical_transport = 0.0;
  EnergyTerms energy;
  double energy_residual = 0.0;
  std::optional<EnstrophyTerms> enstrophy;
  double enstrophy_residual = 0.0;
  std::optional<BackgroundSample> background;
  double temp_min = 0.0, temp_max = 0.0;
  std::array<double, 3> omega_lp{};  // p = 2, 4, 8
  double psi_top = 0.0;
  double psi_top_mean_flow = 0.0;  // -(1/|Omega|) int u1
};

inline constexpr std::array<double, 3> kStripLevels = {0.25, 0.5, 0.75};

DiagnosticsRecord sample_diagnostics(const FlowState& s, const MappedGrid& g, const BoundaryData& bottom,
                                     const BoundaryData& top, const PhysicalParams& params,
                                     const ScalarField* pressure = nullptr, double pressure_defect = 0.0);

/// Running mean and tail max of one scalar.
struct RunningStat {
  long count = 0;
  double mean = 0.0;
  double max = -INFINITY;
  double min = INFINITY;
  void add(double v);
};

struct Averages {
  double t_begin = 0.0, t_end = 0.0;
  long samples = 0;
  RunningStat nu_flux, nu_gradsq, vertical_transport;
  std::array<RunningStat, 3> nu_strip;
  RunningStat energy, grad_u_sq, boundary_friction, buoyancy_flux, enstrophy;
  std::array<RunningStat, 5> enstrophy_terms;
  long enstrophy_samples = 0;
  RunningStat grad_theta_sq, theta_u_grad_eta, grad_T_grad_eta;
  long background_samples = 0;
  RunningStat temp_min, temp_max;
  std::array<RunningStat, 3> omega_lp;
  // transient corrections from the first and last averaged samples
  double energy_first = 0.0, energy_last = 0.0;
  double ens_transient_first = 0.0, ens_transient_last = 0.0;
  double ens_t_first = 0.0, ens_t_last = 0.0;

  double span() const { return t_end - t_begin; }
  /// Averaged energy balance including the mean d/dt term.
  double energy_residual(const PhysicalParams& p) const;
  /// Sum of the averaged enstrophy terms plus the transient, relative to the largest term.
  double enstrophy_residual() const;
  double nu_strip_spread() const;
};

/// Collects records, fills centered-difference residuals, writes CSV rows, and keeps
/// post-burn-in averages.
class Recorder {
 public:
  Recorder(PhysicalParams params, double burn_in, int precision = 17);

  void set_csv(std::ostream* csv, bool write_header = true);
  /// Adds a record; the previous record is finalized (its residuals use both neighbours).
  void add(DiagnosticsRecord r);
  /// Finalizes the last pending record with a one-sided difference.
  void flush();

  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  const Averages& averages() const { return avg_; }
  double burn_in() const { return burn_in_; }

  static const char* csv_header();
  std::string csv_row(const DiagnosticsRecord& r) const;

 private:
  void finalize(std::size_t k, bool last);
  PhysicalParams params_;
  double burn_in_;
  int precision_;
  std::ostream* csv_ = nullptr;
  std::vector<DiagnosticsRecord> records_;
  std::size_t n_final_ = 0;
  Averages avg_;
};

}  // namespace rbslip
