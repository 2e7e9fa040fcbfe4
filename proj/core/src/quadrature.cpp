#include "levylab/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "levylab/error.hpp"

namespace levylab {

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;

  auto rule = std::make_unique<GaussRule>();
  rule->x.resize(static_cast<std::size_t>(n));
  rule->w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule->x[lo] = 0.5 * (1.0 - x);
    rule->x[hi] = 0.5 * (1.0 + x);
    rule->w[lo] = 0.5 * w;
    rule->w[hi] = 0.5 * w;
  }
  if (n % 2 == 1) rule->x[static_cast<std::size_t>(n / 2)] = 0.5;
  slot = std::move(rule);
  return *slot;
}

TanhSinhRule tanh_sinh(int level, double t_max) {
  if (level < 0) throw DomainError("tanh-sinh level must be non-negative");
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double h = std::ldexp(1.0, -level);
  const int k_max = static_cast<int>(std::ceil(t_max / h));
  TanhSinhRule rule;
  rule.level = level;
  for (int k = -k_max; k <= k_max; ++k) {
    const double t = k * h;
    const double u = half_pi * std::sinh(t);
    // x = (1 + tanh u)/2 = 1/(1+e^{-2u}),  1 - x = 1/(1+e^{2u})
    const double lo = 1.0 / (1.0 + std::exp(-2.0 * u));
    const double hi = 1.0 / (1.0 + std::exp(2.0 * u));
    const double ch = std::cosh(u);
    const double w = 0.5 * h * half_pi * std::cosh(t) / (ch * ch);
    if (!(lo > 0.0) || !(hi > 0.0) || !(w > 0.0) || !std::isfinite(w)) continue;
    rule.x.push_back(lo);
    rule.from_lo.push_back(lo);
    rule.from_hi.push_back(hi);
    rule.w.push_back(w);
  }
  return rule;
}

TanhSinhRule tanh_sinh_for_singularity(int level, double strength) {
  if (!(strength >= 0.0 && strength < 1.0)) throw DomainError("singularity strength must be in [0,1)");
  // contribution of the outermost node ~ exp(-2u(1-strength)) must fall below 1e-17
  const double u = 19.6 / (1.0 - strength);
  const double t_max = std::asinh(u / (std::numbers::pi / 2.0));
  return tanh_sinh(level, std::min(t_max, 6.5));
}

std::vector<double> graded_mesh(double lo, double hi, int cells, double grading) {
  if (cells < 1) throw DomainError("mesh needs at least one cell");
  if (!(grading >= 1.0)) throw DomainError("grading exponent must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(cells) + 1);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int j = 0; j <= cells; ++j) {
    const double s = static_cast<double>(j) / cells;
    double x;
    if (2 * j <= cells) {
      x = lo + half * std::pow(2.0 * s, grading);
    } else {
      x = hi - half * std::pow(2.0 * (1.0 - s), grading);
    }
    out[static_cast<std::size_t>(j)] = x;
  }
  out.front() = lo;
  out.back() = hi;
  if (cells % 2 == 0) out[static_cast<std::size_t>(cells / 2)] = mid;
  return out;
}

}  // namespace levylab
