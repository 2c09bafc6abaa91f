#pragma once

#include <vector>

#include "rbslip/grid.hpp"

namespace rbslip {

/// Spectral d/dx1 of every row.
ScalarField d1(const ScalarField& f, const MappedGrid& g);
/// d/dx2: centered inside, one-sided second order on the wall rows.
ScalarField d2(const ScalarField& f, const MappedGrid& g);

/// Physical gradient (d/dy1, d/dy2) = (d1 - h' d2, d2).
VectorField grad_physical(const ScalarField& f, const MappedGrid& g);

/// Divergence-form mapped Laplacian at interior rows; wall rows of the result are zero.
ScalarField apply_L_tilde(const ScalarField& f, const MappedGrid& g);

/// Same operator on every row, wall rows closed with half cells and the given conormal
/// fluxes a21 d1 f + a22 d2 f (nullptr means zero flux).
ScalarField apply_L_tilde_neumann(const ScalarField& f, const MappedGrid& g, const std::vector<double>* flux_bottom,
                                  const std::vector<double>* flux_top);

enum class TraceKind { value, normal_derivative, tangential_derivative };

/// Per-column wall trace. Derivatives are taken along the outward normal / the wall tangent.
std::vector<double> boundary_trace(const ScalarField& f, const MappedGrid& g, Side side, TraceKind kind);

/// Conormal flux a22 d2 f - h' d1 f on row j (one-sided d2 on wall rows).
std::vector<double> conormal_flux(const ScalarField& f, const MappedGrid& g, int j);

/// sum integrand * sqrt(1+h'^2) * dx1: integral along a wall or any level gamma(x2).
double line_integral(const std::vector<double>& integrand, const MappedGrid& g);
/// sum v * dx1 (integral in y1 without the line element).
double column_integral(const std::vector<double>& v, const MappedGrid& g);

/// Integral over the physical domain (unit Jacobian): trapezoid in x2, uniform in x1.
double volume_integral(const ScalarField& f, const MappedGrid& g);
double volume_integral(const ScalarField& a, const ScalarField& b, const MappedGrid& g);

/// Integral over lo <= x2 <= hi of the field, piecewise linear in x2 between nodes.
double strip_integral(const ScalarField& f, const MappedGrid& g, double lo, double hi);

/// Values at level x2 by linear interpolation between rows.
std::vector<double> level_values(const ScalarField& f, const MappedGrid& g, double x2);

/// (integral |f|^p)^(1/p)
double lp_norm(const ScalarField& f, const MappedGrid& g, double p);

double max_abs(const ScalarField& f);

}  // namespace rbslip
