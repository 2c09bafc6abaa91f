#include "rbslip/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rbslip {

MappedGrid::MappedGrid(const HeightProfile& p, int n1_, int n2_)
    : n1(n1_), n2(n2_), gamma(p.gamma), flat(p.flat()), profile(p) {
  if (n1 < 4) throw std::invalid_argument("MappedGrid: n1 must be >= 4");
  if (n2 < 3) throw std::invalid_argument("MappedGrid: n2 must be >= 3");
  dx1 = gamma / n1;
  dx2 = 1.0 / (n2 - 1);
  x1.resize(n1);
  x2.resize(n2);
  for (int i = 0; i < n1; ++i) x1[i] = dx1 * i;
  for (int j = 0; j < n2; ++j) x2[j] = dx2 * j;
  x2[n2 - 1] = 1.0;
  h.resize(n1);
  hp.resize(n1);
  hpp.resize(n1);
  hppp.resize(n1);
  a12.resize(n1);
  a22.resize(n1);
  s.resize(n1);
  double sum = 0.0;
  for (int i = 0; i < n1; ++i) {
    h[i] = evaluate_height(p, x1[i], 0);
    hp[i] = evaluate_height(p, x1[i], 1);
    hpp[i] = evaluate_height(p, x1[i], 2);
    hppp[i] = evaluate_height(p, x1[i], 3);
    a12[i] = -hp[i];
    a22[i] = 1.0 + hp[i] * hp[i];
    s[i] = std::sqrt(a22[i]);
    sum += a22[i];
  }
  a22_mean = sum / n1;
  w2.assign(n2, dx2);
  w2.front() = w2.back() = 0.5 * dx2;
  fft = std::make_shared<RowFft>(n1, gamma);
}

std::string MappedGrid::summary() const {
  std::ostringstream os;
  os.precision(17);
  const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  double hp_max = 0.0;
  for (double v : hp) hp_max = std::max(hp_max, std::abs(v));
  os << "n1 = " << n1 << "\n"
     << "n2 = " << n2 << "\n"
     << "gamma = " << gamma << "\n"
     << "dx1 = " << dx1 << "\n"
     << "dx2 = " << dx2 << "\n"
     << "flat = " << (flat ? 1 : 0) << "\n"
     << "h_min = " << *lo << "\n"
     << "h_max = " << *hi << "\n"
     << "max_abs_hprime = " << hp_max << "\n"
     << "a22_mean = " << a22_mean << "\n";
  return os.str();
}

void ScalarField::set_row(int j, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != n1) throw std::invalid_argument("ScalarField::set_row: length mismatch");
  std::copy(v.begin(), v.end(), row(j));
}

bool fft_friendly(int n) {
  if (n < 1) return false;
  for (int p : {2, 3, 5, 7})
    while (n % p == 0) n /= p;
  return n == 1;
}

}  // namespace rbslip
