#pragma once

#include <string>

namespace rbslip {

struct DimensionalSetup {
  double height_gap = 1.0;           // H
  double temp_gap = 1.0;             // delta T
  double viscosity = 1.0;            // nu
  double thermal_diffusivity = 1.0;  // kappa (thermal)
  double expansion_coeff = 1.0;
  double gravity = 1.0;
  double density_ref = 1.0;

  /// Throws std::invalid_argument naming the first non-positive field.
  void validate() const;
};

struct Nondimensional {
  double ra = 0.0;
  double pr = 0.0;
};

Nondimensional nondimensionalize(const DimensionalSetup& s);

struct CurvatureScaling {
  double ra_ratio = 1.0;
  double kappa_ratio_exact = 1.0;    // (H2^2 + H2) / (H1^2 + H1)
  double kappa_ratio_leading = 1.0;  // (H2 / H1)^2
};

/// Both setups share the dimensional wall profile; only the ratios are meaningful.
CurvatureScaling curvature_scaling(const DimensionalSetup& s1, const DimensionalSetup& s2);

/// temp_ratio^{rho / (2 - 3 rho)}; throws at the pole rho = 2/3.
double ratio_for_target_exponent(double rho, double temp_ratio);

std::string scaling_report(const DimensionalSetup& s1, const DimensionalSetup& s2, double rho);

}  // namespace rbslip
