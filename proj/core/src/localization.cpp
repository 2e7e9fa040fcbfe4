#include "levylab/localization.hpp"

#include <cmath>

#include "levylab/error.hpp"

namespace levylab {

IntervalStats interval_stats(const SpectralDecomposition& sd, double a, double b, double alpha) {
  if (!(a <= b)) throw DomainError("interval needs a <= b");
  IntervalStats st;
  st.a = a;
  st.b = b;
  st.n = sd.n();
  const int n = sd.n();
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  double l4 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double lambda = sd.eigenvalues(j);
    if (lambda < a || lambda > b) continue;
    ++st.count;
    const double* col = sd.eigenvectors.col(j).data();
    for (int k = 0; k < n; ++k) {
      const double s = col[k] * col[k];
      p[static_cast<std::size_t>(k)] += s;
      l4 += s * s;
    }
  }
  if (st.count == 0) return st;
  const double inv = 1.0 / st.count;
  double q = 0.0, r = 0.0;
  for (auto& x : p) {
    x *= inv;
    q += x * x;
    r += std::pow(x, alpha / 2.0);
  }
  st.P = std::move(p);
  st.Q = n * q;
  st.Pi = n * inv * l4;
  st.renyi_half = std::pow(static_cast<double>(n), alpha / 2.0 - 1.0) * r;
  return st;
}

std::pair<double, double> resolvent_upper_bound(const ResolventDiagonal& rd, const IntervalStats& stats) {
  if (stats.empty()) throw DomainError("resolvent bound needs a non-empty interval");
  if (rd.n() != stats.n) throw DomainError("resolvent and interval statistics have different sizes");
  const double center = 0.5 * (stats.a + stats.b);
  const double half = 0.5 * (stats.b - stats.a);
  const double scale = std::max({1.0, std::abs(center), half});
  if (std::abs(rd.z.real() - center) > 1e-12 * scale || std::abs(rd.z.imag() - half) > 1e-12 * scale) {
    throw DomainError("z = E + i eta must match I = [E - eta, E + eta]");
  }
  double m2 = 0.0;
  for (const auto& r : rd.values) m2 += r.imag() * r.imag();
  m2 /= rd.n();
  const double factor = stats.n * (stats.b - stats.a) / stats.count;
  return {stats.Q, factor * factor * m2};
}

double renyi_divergence_stat(const IntervalStats& stats, double p) {
  if (!(p > 0.0)) throw DomainError("Renyi order must be positive");
  if (stats.empty()) throw DomainError("Renyi statistic of an empty interval");
  double acc = 0.0;
  for (double x : stats.P) acc += p == 2.0 ? x * x : (x > 0.0 ? std::pow(x, p) : 0.0);
  return std::pow(static_cast<double>(stats.n), p - 1.0) * acc;
}

double holder_lower_bound(const IntervalStats& stats, double alpha) {
  if (stats.empty()) throw DomainError("Holder bound of an empty interval");
  const double p = 2.0 - alpha / 2.0;
  const double q = p / (p - 1.0);
  return std::pow(stats.renyi_half, -q / p);
}

}  // namespace levylab
