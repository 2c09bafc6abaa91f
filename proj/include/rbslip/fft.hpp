#pragma once

#include <complex>
#include <vector>

namespace rbslip {

/// Real transforms along one periodic row of length n. Plans are built once with
/// FFTW_ESTIMATE so repeated runs pick identical algorithms; execution is thread-safe.
class RowFft {
 public:
  RowFft(int n, double period);
  ~RowFft();
  RowFft(const RowFft&) = delete;
  RowFft& operator=(const RowFft&) = delete;

  int n() const { return n_; }
  int n_modes() const { return n_ / 2 + 1; }
  /// Wavenumber 2 pi m / period.
  double wavenumber(int m) const;
  /// Symbol of the collocation derivative; zero at the Nyquist mode.
  double d1_symbol(int m) const;

  void forward(const double* in, std::complex<double>* out) const;
  /// Includes the 1/n normalisation.
  void inverse(const std::complex<double>* in, double* out) const;
  /// out = d/dx in (spectral, Nyquist dropped). in and out may alias.
  void derivative(const double* in, double* out) const;

 private:
  int n_;
  double period_;
  void* plan_r2c_;
  void* plan_c2r_;
};

}  // namespace rbslip
