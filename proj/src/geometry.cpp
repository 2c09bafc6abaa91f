#include "rbslip/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rbslip {

const char* side_name(Side s) { return s == Side::bottom ? "bottom" : "top"; }

double FourierSeries::eval(double y, int order) const {
  double v = order == 0 ? mean : 0.0;
  for (const auto& m : modes) {
    const double w = 2.0 * std::numbers::pi * m.k / gamma;
    const double ph = w * y;
    const double c = std::cos(ph), s = std::sin(ph);
    // derivative cycle of (cos, sin): cos -> -sin -> -cos -> sin
    double dc, ds;
    switch (order % 4) {
      case 0: dc = c; ds = s; break;
      case 1: dc = -s; ds = c; break;
      case 2: dc = -c; ds = -s; break;
      default: dc = s; ds = -c; break;
    }
    v += std::pow(w, order) * (m.cos_coeff * dc + m.sin_coeff * ds);
  }
  return v;
}

bool HeightProfile::flat() const {
  return std::all_of(modes.begin(), modes.end(),
                     [](const FourierMode& m) { return m.cos_coeff == 0.0 && m.sin_coeff == 0.0; });
}

double evaluate_height(const HeightProfile& profile, double y1, int derivative_order) {
  if (derivative_order < 0 || derivative_order > 3)
    throw std::invalid_argument("evaluate_height: derivative_order must be in 0..3, got " +
                                std::to_string(derivative_order));
  return profile.series().eval(y1, derivative_order);
}

double curvature(const HeightProfile& profile, double y1, Side side) {
  const double hp = evaluate_height(profile, y1, 1);
  const double hpp = evaluate_height(profile, y1, 2);
  const double k = hpp / std::pow(1.0 + hp * hp, 1.5);
  return side == Side::top ? k : -k;
}

double curvature_y1_derivative(const HeightProfile& profile, double y1, Side side) {
  const double hp = evaluate_height(profile, y1, 1);
  const double hpp = evaluate_height(profile, y1, 2);
  const double hppp = evaluate_height(profile, y1, 3);
  const double a = 1.0 + hp * hp;
  const double d = hppp / std::pow(a, 1.5) - 3.0 * hp * hpp * hpp / std::pow(a, 2.5);
  return side == Side::top ? d : -d;
}

namespace {

BoundaryData sample_side(const HeightProfile& profile, int n1, const FourierSeries& alpha, Side side) {
  BoundaryData b;
  b.side = side;
  b.y1.resize(n1);
  b.alpha.resize(n1);
  b.alpha_dot.resize(n1);
  b.kappa.resize(n1);
  b.kappa_dot.resize(n1);
  b.normal.resize(n1);
  b.tangent.resize(n1);
  b.ds_weight.resize(n1);
  const double sign = side == Side::top ? 1.0 : -1.0;
  for (int i = 0; i < n1; ++i) {
    const double y = profile.gamma * i / n1;
    const double hp = evaluate_height(profile, y, 1);
    const double s = std::sqrt(1.0 + hp * hp);
    b.y1[i] = y;
    b.ds_weight[i] = s;
    b.alpha[i] = alpha.eval(y, 0);
    if (b.alpha[i] < 0.0) {
      std::ostringstream os;
      os << "boundary_frames: friction coefficient negative on " << side_name(side) << " wall at y1 = " << y
         << " (alpha = " << b.alpha[i] << ")";
      throw std::invalid_argument(os.str());
    }
    b.alpha_dot[i] = alpha.eval(y, 1) / s;
    b.kappa[i] = curvature(profile, y, side);
    b.kappa_dot[i] = curvature_y1_derivative(profile, y, side) / s;
    const std::array<double, 2> n{-sign * hp / s, sign / s};
    b.normal[i] = n;
    b.tangent[i] = {-n[1], n[0]};
  }
  return b;
}

}  // namespace

std::pair<BoundaryData, BoundaryData> boundary_frames(const HeightProfile& profile, int n1,
                                                      const FourierSeries& alpha_bottom,
                                                      const FourierSeries& alpha_top) {
  if (n1 < 4) throw std::invalid_argument("boundary_frames: n1 must be >= 4");
  BoundaryData bot = sample_side(profile, n1, alpha_bottom, Side::bottom);
  BoundaryData top = sample_side(profile, n1, alpha_top, Side::top);
  const double amin = std::min(*std::min_element(bot.alpha.begin(), bot.alpha.end()),
                               *std::min_element(top.alpha.begin(), top.alpha.end()));
  bot.alpha_min = top.alpha_min = amin;
  return {std::move(bot), std::move(top)};
}

std::pair<BoundaryData, BoundaryData> boundary_frames(const HeightProfile& profile, int n1,
                                                      const FourierSeries& alpha) {
  return boundary_frames(profile, n1, alpha, alpha);
}

std::string ConditionReport::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "condition = " << name << "\n"
     << "pass = " << (pass ? 1 : 0) << "\n"
     << "worst_margin = " << worst_margin << "\n"
     << "worst_side = " << side_name(worst_side) << "\n"
     << "worst_y1 = " << worst_y1 << "\n"
     << "n_samples = " << n_samples << "\n"
     << "n_failed = " << n_failed << "\n"
     << "alpha_min = " << alpha_min << "\n"
     << "kappa_inf = " << kappa_inf << "\n"
     << "alpha_plus_kappa_inf = " << alpha_plus_kappa_inf << "\n"
     << "alpha_plus_kappa_w1inf = " << alpha_plus_kappa_w1inf << "\n"
     << "alpha_dot_inf = " << alpha_dot_inf << "\n"
     << "kappa_dot_inf = " << kappa_dot_inf << "\n";
  return os.str();
}

namespace {

template <class Rhs>
ConditionReport pointwise(const std::string& name, const BoundaryData& bottom, const BoundaryData& top, Rhs rhs) {
  if (bottom.size() != top.size()) throw std::invalid_argument(name + ": sample counts differ");
  ConditionReport r;
  r.name = name;
  r.worst_margin = INFINITY;
  for (const BoundaryData* b : {&bottom, &top}) {
    for (std::size_t i = 0; i < b->size(); ++i) {
      const double m = rhs(b->alpha[i], b->ds_weight[i]) - std::abs(b->kappa[i]);
      ++r.n_samples;
      if (m < 0.0) ++r.n_failed;
      if (m < r.worst_margin) {
        r.worst_margin = m;
        r.worst_side = b->side;
        r.worst_y1 = b->y1[i];
      }
    }
  }
  r.pass = r.n_failed == 0;
  r.alpha_min = bottom.alpha_min;
  for (const BoundaryData* b : {&bottom, &top}) {
    for (std::size_t i = 0; i < b->size(); ++i) {
      r.kappa_inf = std::max(r.kappa_inf, std::abs(b->kappa[i]));
      r.alpha_plus_kappa_inf = std::max(r.alpha_plus_kappa_inf, std::abs(b->alpha[i] + b->kappa[i]));
      r.alpha_dot_inf = std::max(r.alpha_dot_inf, std::abs(b->alpha_dot[i]));
      r.kappa_dot_inf = std::max(r.kappa_dot_inf, std::abs(b->kappa_dot[i]));
      r.alpha_plus_kappa_w1inf =
          std::max({r.alpha_plus_kappa_w1inf, std::abs(b->alpha[i] + b->kappa[i]),
                    std::abs(b->alpha_dot[i] + b->kappa_dot[i])});
    }
  }
  return r;
}

}  // namespace

ConditionReport check_condition_ec(const BoundaryData& bottom, const BoundaryData& top) {
  return pointwise("ec", bottom, top, [](double a, double s) {
    return 2.0 * a + std::min(1.0, std::sqrt(a)) / (4.0 * s);
  });
}

ConditionReport check_condition_theorem2(const BoundaryData& bottom, const BoundaryData& top,
                                         KappaVariant variant) {
  if (variant == KappaVariant::kappa_leq_alpha)
    return pointwise("kappa_leq_alpha", bottom, top, [](double a, double) { return a; });
  return pointwise("kappa_general", bottom, top,
                   [](double a, double s) { return 2.0 * a + std::sqrt(a) / (4.0 * s); });
}

double height_range(const HeightProfile& profile, int n) {
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i < n; ++i) {
    const double h = evaluate_height(profile, profile.gamma * i / n, 0);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  return hi - lo;
}

BoundaryNorms boundary_norms(const HeightProfile& profile, const BoundaryData& bottom, const BoundaryData& top) {
  const ConditionReport r = check_condition_theorem2(bottom, top, KappaVariant::general);
  BoundaryNorms n;
  n.kappa_inf = r.kappa_inf;
  n.alpha_min = r.alpha_min;
  n.alpha_plus_kappa_inf = r.alpha_plus_kappa_inf;
  n.alpha_plus_kappa_w1inf = r.alpha_plus_kappa_w1inf;
  n.alpha_dot_inf = r.alpha_dot_inf;
  n.kappa_dot_inf = r.kappa_dot_inf;
  n.n1 = static_cast<int>(bottom.size());
  n.h_max = -INFINITY;
  n.h_min = INFINITY;
  for (double y : bottom.y1) {
    const double h = evaluate_height(profile, y, 0);
    n.h_max = std::max(n.h_max, h);
    n.h_min = std::min(n.h_min, h);
  }
  return n;
}

}  // namespace rbslip
