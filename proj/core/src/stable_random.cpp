#include "levylab/stable_random.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "levylab/error.hpp"

namespace levylab {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw DomainError("alpha must lie in (0,2), got " + std::to_string(alpha));
  }
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream derive_stream(std::uint64_t master, std::uint64_t task) {
  return RngStream(mix64(mix64(master) ^ mix64(task + 0x632be59bd9b4e019ULL)));
}

RngStream derive_stream(std::uint64_t master, std::uint64_t task, std::uint64_t subtask) {
  return derive_stream(mix64(master) ^ task, subtask);
}

StableLaw::StableLaw(double alpha) : StableLaw(alpha, tail_normalization(alpha)) {}

StableLaw::StableLaw(double alpha, double sigma_alpha) : alpha_(alpha), sigma_alpha_(sigma_alpha) {
  require_alpha(alpha);
  if (!(sigma_alpha > 0.0)) throw DomainError("sigma^alpha must be positive");
  sigma_ = std::pow(sigma_alpha_, 1.0 / alpha_);
}

double StableLaw::tail_normalization(double alpha) {
  require_alpha(alpha);
  return std::numbers::pi / (2.0 * std::sin(std::numbers::pi * alpha / 2.0) * std::tgamma(alpha));
}

double sample_standard_stable(const StableLaw& law, RngStream& rng) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  std::uniform_real_distribution<double> angle(-half_pi, half_pi);
  std::exponential_distribution<double> expo(1.0);
  const double v = angle(rng);
  const double alpha = law.alpha();
  if (alpha == 1.0) return law.sigma() * std::tan(v);
  const double w = expo(rng);
  const double x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  return law.sigma() * x;
}

double sample_gaussian(RngStream& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

double PoissonWeights::tail_mean() const {
  if (xi.empty()) return 0.0;
  const double half = alpha / 2.0;
  return half / (1.0 - half) * std::pow(xi.back(), 1.0 - half);
}

double PoissonWeights::sum() const {
  double s = 0.0;
  // smallest first
  for (auto it = xi.rbegin(); it != xi.rend(); ++it) s += *it;
  return s;
}

PoissonWeights poisson_weights(double alpha, int K, RngStream& rng) {
  require_alpha(alpha);
  if (K <= 0) throw DomainError("Poisson truncation K must be positive");
  std::exponential_distribution<double> expo(1.0);
  PoissonWeights out;
  out.alpha = alpha;
  out.xi.resize(static_cast<std::size_t>(K));
  const double exponent = -2.0 / alpha;
  double gamma_k = 0.0;
  for (auto& x : out.xi) {
    gamma_k += expo(rng);
    x = std::pow(gamma_k, exponent);
  }
  return out;
}

}  // namespace levylab
