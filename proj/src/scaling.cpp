#include "rbslip/scaling.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace rbslip {

void DimensionalSetup::validate() const {
  const std::pair<const char*, double> fields[] = {{"height_gap", height_gap},
                                                   {"temp_gap", temp_gap},
                                                   {"viscosity", viscosity},
                                                   {"thermal_diffusivity", thermal_diffusivity},
                                                   {"expansion_coeff", expansion_coeff},
                                                   {"gravity", gravity},
                                                   {"density_ref", density_ref}};
  for (const auto& [name, v] : fields)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

Nondimensional nondimensionalize(const DimensionalSetup& s) {
  s.validate();
  const double h = s.height_gap;
  return {s.expansion_coeff * s.gravity * s.temp_gap * h * h * h / (s.viscosity * s.thermal_diffusivity),
          s.viscosity / s.thermal_diffusivity};
}

CurvatureScaling curvature_scaling(const DimensionalSetup& s1, const DimensionalSetup& s2) {
  const Nondimensional a = nondimensionalize(s1), b = nondimensionalize(s2);
  const double h1 = s1.height_gap, h2 = s2.height_gap;
  CurvatureScaling c;
  c.ra_ratio = b.ra / a.ra;
  c.kappa_ratio_exact = (h2 * h2 + h2) / (h1 * h1 + h1);
  c.kappa_ratio_leading = (h2 / h1) * (h2 / h1);
  return c;
}

double ratio_for_target_exponent(double rho, double temp_ratio) {
  if (!(temp_ratio > 0.0)) throw std::invalid_argument("temp_ratio must be positive");
  const double den = 2.0 - 3.0 * rho;
  if (std::abs(den) < 1e-12)
    throw std::domain_error("rho = 2/3 is a pole of rho / (2 - 3 rho): no height ratio realises this exponent");
  return std::pow(temp_ratio, rho / den);
}

std::string scaling_report(const DimensionalSetup& s1, const DimensionalSetup& s2, double rho) {
  std::ostringstream os;
  os << std::setprecision(12);
  const Nondimensional a = nondimensionalize(s1), b = nondimensionalize(s2);
  const CurvatureScaling c = curvature_scaling(s1, s2);
  os << "ra_1 = " << a.ra << "\npr_1 = " << a.pr << "\nra_2 = " << b.ra << "\npr_2 = " << b.pr
     << "\nra_ratio = " << c.ra_ratio << "\nkappa_ratio_exact = " << c.kappa_ratio_exact
     << "\nkappa_ratio_leading = " << c.kappa_ratio_leading << '\n';
  const double tr = s2.temp_gap / s1.temp_gap;
  os << "rho = " << rho << "\ntemp_ratio = " << tr << '\n';
  try {
    os << "height_ratio = " << ratio_for_target_exponent(rho, tr) << '\n';
  } catch (const std::domain_error& e) {
    os << "height_ratio = undefined (" << e.what() << ")\n";
  }
  return os.str();
}

}  // namespace rbslip
