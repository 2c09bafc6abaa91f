#pragma once

#include <array>
#include <string>
#include <vector>

namespace rbslip {

enum class Side { bottom, top };

const char* side_name(Side s);

struct FourierMode {
  int k = 1;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
  bool operator==(const FourierMode&) const = default;
};

/// Finite Fourier series on [0, gamma): mean + sum_k c cos(2 pi k y / gamma) + s sin(...)
struct FourierSeries {
  double gamma = 1.0;
  double mean = 0.0;
  std::vector<FourierMode> modes;

  /// d^order/dy^order of the series at y (any order >= 0).
  double eval(double y, int order = 0) const;
  bool operator==(const FourierSeries&) const = default;
};

struct HeightProfile {
  double gamma = 1.0;
  std::vector<FourierMode> modes;
  double mean_offset = 0.0;

  bool flat() const;
  FourierSeries series() const { return {gamma, mean_offset, modes}; }
  bool operator==(const HeightProfile&) const = default;
};

/// Exact d^k h / dy^k for k in 0..3.
double evaluate_height(const HeightProfile& profile, double y1, int derivative_order);

/// Signed curvature: -h''/(1+h'^2)^{3/2} on the bottom wall, + on the top wall.
double curvature(const HeightProfile& profile, double y1, Side side);

/// d kappa / dy1 (not yet divided by the line element).
double curvature_y1_derivative(const HeightProfile& profile, double y1, Side side);

struct BoundaryData {
  Side side = Side::bottom;
  std::vector<double> y1;
  std::vector<double> alpha;
  std::vector<double> alpha_dot;
  std::vector<double> kappa;
  std::vector<double> kappa_dot;
  std::vector<std::array<double, 2>> normal;
  std::vector<std::array<double, 2>> tangent;
  std::vector<double> ds_weight;
  double alpha_min = 0.0;

  std::size_t size() const { return y1.size(); }
};

/// Samples both walls at n1 equispaced points. Throws if alpha < 0 anywhere.
std::pair<BoundaryData, BoundaryData> boundary_frames(const HeightProfile& profile, int n1,
                                                      const FourierSeries& alpha_bottom,
                                                      const FourierSeries& alpha_top);
std::pair<BoundaryData, BoundaryData> boundary_frames(const HeightProfile& profile, int n1,
                                                      const FourierSeries& alpha);

struct ConditionReport {
  std::string name;
  bool pass = true;
  double worst_margin = 0.0;
  Side worst_side = Side::bottom;
  double worst_y1 = 0.0;
  int n_samples = 0;
  int n_failed = 0;
  // norms (filled by the theorem-2 check)
  double alpha_plus_kappa_inf = 0.0;
  double alpha_plus_kappa_w1inf = 0.0;
  double alpha_dot_inf = 0.0;
  double kappa_dot_inf = 0.0;
  double kappa_inf = 0.0;
  double alpha_min = 0.0;

  std::string to_text() const;
};

enum class KappaVariant { kappa_leq_alpha, general };

ConditionReport check_condition_ec(const BoundaryData& bottom, const BoundaryData& top);
ConditionReport check_condition_theorem2(const BoundaryData& bottom, const BoundaryData& top,
                                         KappaVariant variant);

struct BoundaryNorms {
  double kappa_inf = 0.0;
  double alpha_min = 0.0;
  double alpha_plus_kappa_inf = 0.0;
  double alpha_plus_kappa_w1inf = 0.0;
  double alpha_dot_inf = 0.0;
  double kappa_dot_inf = 0.0;
  double h_max = 0.0;
  double h_min = 0.0;
  int n1 = 0;
};

BoundaryNorms boundary_norms(const HeightProfile& profile, const BoundaryData& bottom,
                             const BoundaryData& top);

/// max h - min h estimated on n equispaced samples.
double height_range(const HeightProfile& profile, int n);

}  // namespace rbslip
