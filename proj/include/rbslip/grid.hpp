#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rbslip/fft.hpp"
#include "rbslip/geometry.hpp"

namespace rbslip {

/// Flattened channel [0, gamma) x [0, 1], x = (y1, y2 - h(y1)).
/// n1 periodic columns, n2 nodes in x2 including both wall rows.
struct MappedGrid {
  int n1 = 0;
  int n2 = 0;
  double gamma = 1.0;
  double dx1 = 0.0;
  double dx2 = 0.0;
  bool flat = true;
  HeightProfile profile;

  std::vector<double> x1, x2;
  // per column
  std::vector<double> h, hp, hpp, hppp;
  std::vector<double> a12;  // -h'
  std::vector<double> a22;  // 1 + h'^2
  std::vector<double> s;    // sqrt(1 + h'^2)
  // trapezoid weights in x2 (dx2/2 on the wall rows)
  std::vector<double> w2;
  double a22_mean = 1.0;

  std::shared_ptr<const RowFft> fft;

  MappedGrid() = default;
  MappedGrid(const HeightProfile& profile, int n1, int n2);

  std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * n1 + i; }
  /// Physical height y2 of node (i, j).
  double y2(int i, int j) const { return x2[j] + h[i]; }
  std::string summary() const;
};

enum class BcKind { dirichlet_given, neumann_given, periodic_only };

/// Row-major values, row j is the x2 level, index j*n1 + i.
struct ScalarField {
  int n1 = 0;
  int n2 = 0;
  std::vector<double> values;
  BcKind bc = BcKind::dirichlet_given;

  ScalarField() = default;
  ScalarField(int n1_, int n2_, double v = 0.0, BcKind k = BcKind::dirichlet_given)
      : n1(n1_), n2(n2_), values(static_cast<std::size_t>(n1_) * n2_, v), bc(k) {}
  explicit ScalarField(const MappedGrid& g, double v = 0.0, BcKind k = BcKind::dirichlet_given)
      : ScalarField(g.n1, g.n2, v, k) {}

  double& operator()(int i, int j) { return values[static_cast<std::size_t>(j) * n1 + i]; }
  double operator()(int i, int j) const { return values[static_cast<std::size_t>(j) * n1 + i]; }
  double* row(int j) { return values.data() + static_cast<std::size_t>(j) * n1; }
  const double* row(int j) const { return values.data() + static_cast<std::size_t>(j) * n1; }
  std::vector<double> row_copy(int j) const { return {row(j), row(j) + n1}; }
  void set_row(int j, const std::vector<double>& v);
};

struct VectorField {
  ScalarField c1, c2;
};

/// Sample f(y1, y2) at the grid nodes in physical coordinates.
template <class F>
ScalarField sample_physical(const MappedGrid& g, F&& f) {
  ScalarField out(g);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) out(i, j) = f(g.x1[i], g.y2(i, j));
  return out;
}

/// Sample f(x1, x2) at the grid nodes in flattened coordinates.
template <class F>
ScalarField sample_flat(const MappedGrid& g, F&& f) {
  ScalarField out(g);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) out(i, j) = f(g.x1[i], g.x2[j]);
  return out;
}

/// True if n has no prime factor above 7.
bool fft_friendly(int n);

}  // namespace rbslip
