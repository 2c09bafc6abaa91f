#pragma once

#include <array>
#include <complex>

#include <cstdint>
#include <vector>

#include "rbslip/elliptic.hpp"
#include "rbslip/geometry.hpp"
#include "rbslip/grid.hpp"

namespace rbslip {

struct PhysicalParams {
  double ra = 1e5;
  double pr = 10.0;
  bool operator==(const PhysicalParams&) const = default;
};

enum class AdvectionForm { skew_symmetric, conservative };

struct SolverOptions {
  double theta = 0.5;  // 0.5 = Crank-Nicolson
  int coupling_sweeps = 0;
  double coupling_tol = 1e-8;
  double cfl = 0.4;
  AdvectionForm advection = AdvectionForm::skew_symmetric;
  EllipticOptions elliptic;
};

struct FlowState {
  ScalarField omega, psi, temp;
  ScalarField u1, u2;
  double time = 0.0;
  double psi_top = 0.0;
  double circulation = 0.0;  // integral of u_tau along the bottom wall
  std::int64_t step = 0;
  // Adams-Bashforth history
  bool has_history = false;
  double dt_prev = 0.0;
  ScalarField n_omega_prev, n_temp_prev;
};

struct StepResult {
  bool accepted = true;
  double suggested_dt = 0.0;
  int sweeps = 0;
  int cg_iterations = 0;
};

/// -2 (alpha + kappa) u_tau
std::vector<double> boundary_vorticity(const std::vector<double>& u_tau, const BoundaryData& boundary);

struct PressureStats {
  double compatibility_defect = 0.0;
  double compatibility_defect_relative = 0.0;
  int iterations = 0;
};

/// Semi-implicit integrator for the vorticity / stream-function / temperature system.
class Stepper {
 public:
  Stepper(const MappedGrid& g, const BoundaryData& bottom, const BoundaryData& top, PhysicalParams params,
          SolverOptions opt = {});

  const MappedGrid& grid() const { return g_; }
  const BoundaryData& bottom() const { return bottom_; }
  const BoundaryData& top() const { return top_; }
  const PhysicalParams& params() const { return params_; }
  const SolverOptions& options() const { return opt_; }
  const EllipticSolver& elliptic() const { return es_; }

  /// Builds a consistent state from T0 and a stream function psi0 vanishing on both walls.
  FlowState initial_state(const ScalarField& temp0, const ScalarField& psi0) const;

  StepResult step(FlowState& s, double dt) const;

  /// Largest dt allowed by the advective CFL limit.
  double cfl_dt(const FlowState& s) const;
  /// Limit on the explicit buoyancy coupling.
  double explicit_dt_limit() const;

  std::vector<double> u_tau(const FlowState& s, Side side) const;
  void recover_velocity(FlowState& s) const;
  ScalarField recover_pressure(const FlowState& s, PressureStats* stats = nullptr) const;

  /// Explicit right-hand sides at the current level.
  void explicit_terms(const FlowState& s, ScalarField& n_omega, ScalarField& n_temp) const;
  /// Advection u.grad q at interior rows.
  ScalarField advection(const ScalarField& psi, const ScalarField& q) const;

 private:
  double circulation_of(const ScalarField& psi) const;
  double wall_vorticity_flux(const ScalarField& omega) const;
  /// One pass of the wall coupling: vorticity with wall values (wb, wt), circulation, stream
  /// function, velocity traces. Returns the implied wall vorticity; affine in (wb, wt).
  std::array<std::vector<double>, 2> wall_map(double sigma_w, const ScalarField& rhs_w, const std::vector<double>& wb,
                                              const std::vector<double>& wt, double circ_old, double flux_old,
                                              double dt, double theta, const ScalarField* omega_guess, ScalarField& psi0,
                                              FlowState& s, int& iterations) const;
  /// Inverse of I - (linear part of wall_map) per x1 Fourier mode, exact for translation-invariant walls.
  void prepare_coupling(double sigma_w, double dt, double theta) const;
  std::array<std::vector<double>, 2> coupling_correction(const std::vector<double>& rb,
                                                         const std::vector<double>& rt) const;

  const MappedGrid& g_;
  BoundaryData bottom_, top_;
  PhysicalParams params_;
  SolverOptions opt_;
  EllipticSolver es_;
  ScalarField psi_unit_;  // harmonic, 0 on the bottom, 1 on the top
  double circulation_unit_ = 0.0;
  mutable double coupling_dt_ = -1.0, coupling_theta_ = -1.0;
  mutable std::vector<std::array<std::complex<double>, 4>> coupling_inv_;  // per mode: bb, bt, tb, tt
};

ScalarField recover_pressure(const FlowState& s, const PhysicalParams& params, const MappedGrid& g,
                             const BoundaryData& bottom, const BoundaryData& top, PressureStats* stats = nullptr);

/// Conduction profile 1 - x2 plus sin(pi x2) times a few random-phase x1 modes, max amplitude `amplitude`.
ScalarField initial_temperature(const MappedGrid& g, double amplitude, std::uint64_t seed, int n_modes = 4);

struct StreamMode {
  int k = 1;  // x1 wavenumber index
  int m = 1;  // x2 sine index
  double cos_amp = 0.0;
  double sin_amp = 0.0;
  bool operator==(const StreamMode&) const = default;
};

/// psi = sum sin(m pi x2) (a cos(2 pi k x1/gamma) + b sin(...)); zero on both walls.
ScalarField stream_function_from_modes(const MappedGrid& g, const std::vector<StreamMode>& modes);

}  // namespace rbslip
