#include "rbslip/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace rbslip {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RowFft::RowFft(int n, double period) : n_(n), period_(period) {
  if (n < 2) throw std::invalid_argument("RowFft: n must be >= 2");
  std::vector<double> r(n);
  std::vector<std::complex<double>> c(n / 2 + 1);
  auto* cc = reinterpret_cast<fftw_complex*>(c.data());
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_r2c_ = fftw_plan_dft_r2c_1d(n, r.data(), cc, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_c2r_ = fftw_plan_dft_c2r_1d(n, cc, r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
  if (!plan_r2c_ || !plan_c2r_) throw std::runtime_error("RowFft: FFTW planning failed");
}

RowFft::~RowFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
}

double RowFft::wavenumber(int m) const { return 2.0 * std::numbers::pi * m / period_; }

double RowFft::d1_symbol(int m) const {
  if (n_ % 2 == 0 && m == n_ / 2) return 0.0;
  return wavenumber(m);
}

void RowFft::forward(const double* in, std::complex<double>* out) const {
  thread_local std::vector<double> buf;
  buf.assign(in, in + n_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), buf.data(), reinterpret_cast<fftw_complex*>(out));
}

void RowFft::inverse(const std::complex<double>* in, double* out) const {
  thread_local std::vector<std::complex<double>> buf;
  buf.assign(in, in + n_modes());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_), reinterpret_cast<fftw_complex*>(buf.data()), out);
  const double inv = 1.0 / n_;
  for (int i = 0; i < n_; ++i) out[i] *= inv;
}

void RowFft::derivative(const double* in, double* out) const {
  thread_local std::vector<std::complex<double>> spec;
  spec.resize(n_modes());
  forward(in, spec.data());
  for (int m = 0; m < n_modes(); ++m) spec[m] *= std::complex<double>(0.0, d1_symbol(m));
  inverse(spec.data(), out);
}

}  // namespace rbslip
