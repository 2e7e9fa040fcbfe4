#include "levylab/stable_laplace.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "levylab/error.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/special.hpp"

namespace levylab {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Nodes s in (0,1) (relative to T), s^{2/α}, and weights including s^{2p/α-1}.
struct RelativeRule {
  std::vector<double> s;
  std::vector<double> s_pow;
  std::vector<double> w;
};

// Breakpoints: `top` uniform panels on [first,1] (first = 1/8, or the width of one
// uniform panel when top > 8), then ratio-4 panels toward 0.
std::vector<double> relative_breaks(int top, int levels) {
  const double first = top > 8 ? 1.0 / top : 0.125;
  std::vector<double> breaks;
  for (int k = 0; k < top; ++k) breaks.push_back(1.0 - k * (1.0 - first) / top);
  breaks.push_back(first);
  for (int level = 0; level < levels; ++level) breaks.push_back(breaks.back() / 4.0);
  breaks.push_back(0.0);
  return breaks;
}

// Uniform panels needed on the top part: the real exponent changes by cutoff/β per unit s.
int top_panels(double alpha, const LaplaceRule& rule) {
  return std::max(3, static_cast<int>(std::ceil(rule.cutoff / (alpha / 2.0) / 24.0)));
}

void append_panels(const std::vector<double>& breaks, double p, double alpha, const GaussRule& g,
                   RelativeRule& out) {
  const double e_pow = 2.0 / alpha;
  const double e_jac = 2.0 * p / alpha - 1.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double hi = breaks[k], lo = breaks[k + 1];
    if (lo == 0.0) {
      // s = hi u^{1/q} absorbs the weight s^{q-1}
      const double q = e_jac + 1.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = hi * std::pow(g.x[i], 1.0 / q);
        out.s.push_back(s);
        out.s_pow.push_back(std::pow(s, e_pow));
        out.w.push_back(std::pow(hi, q) / q * g.w[i] * e_pow);
      }
      continue;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = lo + (hi - lo) * g.x[i];
      out.s.push_back(s);
      out.s_pow.push_back(std::pow(s, e_pow));
      out.w.push_back((hi - lo) * g.w[i] * std::pow(s, e_jac) * e_pow);
    }
  }
}

const RelativeRule& relative_rule(double p, double alpha, const LaplaceRule& rule) {
  using Key = std::tuple<double, double, int, int, double>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<RelativeRule>> cache;
  const Key key{p, alpha, rule.gauss_nodes, rule.geometric_levels, rule.cutoff};
  std::lock_guard lock(mutex);
  auto& slot = cache[key];
  if (slot) return *slot;
  auto out = std::make_unique<RelativeRule>();
  append_panels(relative_breaks(top_panels(alpha, rule), rule.geometric_levels), p, alpha,
                gauss_legendre(rule.gauss_nodes), *out);
  slot = std::move(out);
  return *slot;
}

// Smallest T with ReA T^{2/α} + ReB T = cutoff (Newton from above on a convex function).
double truncation_point(double re_a, double re_b, double alpha, double cutoff) {
  const double e = 2.0 / alpha;
  double t = std::numeric_limits<double>::infinity();
  if (re_a > 0.0) t = std::min(t, std::pow(cutoff / re_a, 1.0 / e));
  if (re_b > 0.0) t = std::min(t, cutoff / re_b);
  if (!std::isfinite(t)) throw DomainError("Laplace-stable integral does not converge");
  for (int iter = 0; iter < 60; ++iter) {
    const double te = std::pow(t, e);
    const double f = re_a * te + re_b * t - cutoff;
    const double df = re_a * e * te / t + re_b;
    const double step = f / df;
    if (!(df > 0.0)) break;
    t -= step;
    if (std::abs(step) <= 1e-15 * t) break;
  }
  return t;
}

double phase_span(cplx A, cplx B, double T, double alpha) {
  return std::abs(A.imag()) * std::pow(T, 2.0 / alpha) + std::abs(B.imag()) * T;
}

}  // namespace

namespace {

// Debug builds verify |Ψ| against the absolute-integrand bound.
cplx checked(double p, cplx a, cplx b, double alpha, cplx value) {
#ifndef NDEBUG
  const double bound = laplace_stable_bound(p, a, b, alpha);
  assert(!(std::abs(value) > bound * (1.0 + 1e-6) + 1e-300));
#else
  (void)p, (void)a, (void)b, (void)alpha;
#endif
  return value;
}

}  // namespace

cplx laplace_stable(double p, cplx a, cplx b, double alpha, const LaplaceRule& rule) {
  if (!(p > 0.0)) throw DomainError("Laplace-stable integral needs p > 0");
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0,2)");
  const double tiny = 1e-14;
  if (a.real() < -tiny * std::abs(a) || b.real() < -tiny * std::abs(b)) {
    throw DomainError("Laplace-stable integral needs Re a >= 0 and Re b >= 0");
  }
  const double beta = alpha / 2.0;
  if (std::abs(b) == 0.0) {
    if (!(a.real() > 0.0) && std::abs(a) == 0.0) throw DomainError("Laplace-stable integral diverges");
    return std::tgamma(p) * std::pow(a, -p);
  }
  if (std::abs(a) == 0.0) {
    const double q = p / beta;
    return (1.0 / beta) * std::tgamma(q) * std::pow(b, -q);
  }

  // rotate the contour: target φ = -arg a, keep |arg b + β φ| <= π/2
  const double arg_a = std::atan2(a.imag(), std::max(a.real(), 0.0));
  const double arg_b = std::atan2(b.imag(), std::max(b.real(), 0.0));
  const double phi = std::clamp(-arg_a, (-kHalfPi - arg_b) / beta, (kHalfPi - arg_b) / beta);
  const cplx A = a * std::polar(1.0, phi);
  const cplx B = b * std::polar(1.0, beta * phi);
  const double re_a = std::max(A.real(), 0.0);
  const double re_b = std::max(B.real(), 0.0);
  if (!(re_a > 0.0) && !(re_b > 0.0)) throw DomainError("Laplace-stable integral does not converge");

  const double T = truncation_point(re_a, re_b, alpha, rule.cutoff);
  const cplx ca = A * std::pow(T, 2.0 / alpha);
  const cplx cb = B * T;
  const cplx prefactor = std::polar(std::pow(T, 2.0 * p / alpha), p * phi);

  cplx acc = 0.0;
  if (phase_span(A, B, T, alpha) <= rule.max_phase) {
    const RelativeRule& rr = relative_rule(p, alpha, rule);
    for (std::size_t i = 0; i < rr.s.size(); ++i) {
      acc += rr.w[i] * std::exp(-ca * rr.s_pow[i] - cb * rr.s[i]);
    }
    return checked(p, a, b, alpha, prefactor * acc);
  }

  // oscillatory case: enough uniform panels to bound the phase change per panel
  const double span = std::abs(ca.imag()) + std::abs(cb.imag());
  const int top = std::max(top_panels(alpha, rule), static_cast<int>(std::ceil(span / rule.max_phase)));
  RelativeRule rr;
  append_panels(relative_breaks(top, rule.geometric_levels), p, alpha, gauss_legendre(rule.gauss_nodes), rr);
  for (std::size_t i = 0; i < rr.s.size(); ++i) acc += rr.w[i] * std::exp(-ca * rr.s_pow[i] - cb * rr.s[i]);
  return checked(p, a, b, alpha, prefactor * acc);
}

double laplace_stable_bound(double p, cplx a, cplx b, double alpha) {
  const double q = 2.0 * p / alpha;
  double bound = std::numeric_limits<double>::infinity();
  if (b.real() > 0.0) bound = std::min(bound, (2.0 / alpha) * std::tgamma(q) * std::pow(b.real(), -q));
  if (a.real() > 0.0) bound = std::min(bound, std::tgamma(p) * std::pow(a.real(), -p));
  return bound;
}

}  // namespace levylab
