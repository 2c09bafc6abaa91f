#pragma once

#include "rbslip/grid.hpp"

// Serial, unoptimized versions of the hot kernels. Used to cross-check the
// OpenMP/FFT implementations and as the benchmark baseline.
namespace rbslip::reference {

/// d/dx1 by direct O(n1^2) trigonometric sums, Nyquist dropped.
ScalarField d1(const ScalarField& f, const MappedGrid& g);
ScalarField d2(const ScalarField& f, const MappedGrid& g);
/// Mapped operator in divergence form, interior rows only.
ScalarField apply_L_tilde(const ScalarField& f, const MappedGrid& g);
double volume_integral(const ScalarField& a, const ScalarField& b, const MappedGrid& g);
/// u.grad q in skew-symmetric form, from psi.
ScalarField advection_skew(const ScalarField& psi, const ScalarField& q, const MappedGrid& g);

}  // namespace rbslip::reference
