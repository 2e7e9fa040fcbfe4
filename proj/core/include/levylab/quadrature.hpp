#pragma once

#include <vector>

namespace levylab {

/// Gauss–Legendre rule mapped to [0,1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const noexcept { return x.size(); }
};

/// n-point Gauss–Legendre rule on [0,1] (Newton on the Legendre recurrence).
const GaussRule& gauss_legendre(int n);

/// Double-exponential (tanh-sinh) rule on [0,1]. Nodes are stored together with
/// their distance to each endpoint so that endpoint singularities can be
/// evaluated without cancellation.
struct TanhSinhRule {
  std::vector<double> x;        ///< node position in (0,1)
  std::vector<double> from_lo;  ///< x, accurate near 0
  std::vector<double> from_hi;  ///< 1 - x, accurate near 1
  std::vector<double> w;
  int level = 0;
  std::size_t size() const noexcept { return x.size(); }
};

/// Step 2^{-level}; the abscissa range |t| <= t_max.
TanhSinhRule tanh_sinh(int level, double t_max = 4.0);

/// Rule reaching double precision for an endpoint singularity |x|^{-strength},
/// strength in [0,1).
TanhSinhRule tanh_sinh_for_singularity(int level, double strength);

/// Breakpoints of a symmetric mesh on [lo, hi] graded toward both ends with exponent
/// `grading` (1 = uniform). `cells` intervals in total.
std::vector<double> graded_mesh(double lo, double hi, int cells, double grading);

}  // namespace levylab
