#pragma once

#include <stdexcept>
#include <vector>

#include "rbslip/grid.hpp"

namespace rbslip {

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  double compatibility_defect = 0.0;           // Neumann only, before subtraction
  double compatibility_defect_relative = 0.0;  // scaled by the rhs magnitude
};

struct EllipticOptions {
  double tolerance = 1e-10;
  int max_iterations = 0;  // 0: 10 * n2 * sqrt(n1)
};

/// Preconditioned CG for the mapped divergence-form operator. The preconditioner is the
/// flat-metric operator (mean of 1+h'^2 as x2 coefficient) inverted per x1 Fourier mode, so
/// on flat walls a single iteration is exact.
class EllipticSolver {
 public:
  explicit EllipticSolver(const MappedGrid& g, EllipticOptions opt = {});

  /// sigma x - L x = rhs on interior rows with x given on the wall rows.
  ScalarField solve_helmholtz(double sigma, const ScalarField& rhs, const std::vector<double>& bottom,
                              const std::vector<double>& top, const ScalarField* guess = nullptr,
                              SolveStats* stats = nullptr) const;

  /// L x = rhs with Dirichlet traces.
  ScalarField solve_poisson_dirichlet(const ScalarField& rhs, const std::vector<double>& bottom,
                                      const std::vector<double>& top, const ScalarField* guess = nullptr,
                                      SolveStats* stats = nullptr) const;

  /// L p = rhs with outward physical normal derivatives n.grad p given on each wall.
  /// The compatibility defect is removed from rhs; the result has zero mean.
  ScalarField solve_poisson_neumann(const ScalarField& rhs, const std::vector<double>& bottom_normal_derivative,
                                    const std::vector<double>& top_normal_derivative,
                                    SolveStats* stats = nullptr) const;

  const MappedGrid& grid() const { return g_; }
  int max_iterations() const { return max_iter_; }

 private:
  enum class Mode { dirichlet, neumann };
  void apply(Mode mode, double sigma, const ScalarField& x, ScalarField& out) const;
  void precondition(Mode mode, double sigma, const ScalarField& r, ScalarField& z) const;
  double dot(Mode mode, const ScalarField& a, const ScalarField& b) const;
  void remove_mean(ScalarField& x) const;
  ScalarField pcg(Mode mode, double sigma, const ScalarField& b, ScalarField x, SolveStats* stats) const;

  const MappedGrid& g_;
  EllipticOptions opt_;
  int max_iter_;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rbslip
