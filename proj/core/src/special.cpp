#include "levylab/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace levylab {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

cplx complex_gamma(cplx z) {
  constexpr double pi = std::numbers::pi;
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * complex_gamma(1.0 - z));
  z -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cplx complex_lgamma(cplx z) {
  constexpr double pi = std::numbers::pi;
  if (z.real() < 0.5) return std::log(pi / std::sin(pi * z)) - complex_lgamma(1.0 - z);
  z -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

double c_alpha(double alpha) {
  const double g = std::tgamma(alpha / 2.0);
  return alpha / (std::pow(2.0, alpha / 2.0) * g * g);
}

cplx c_alpha(cplx alpha) {
  // log-space keeps this finite for large |Im α|
  const cplx log_c = std::log(alpha) - 0.5 * alpha * std::log(2.0) - 2.0 * complex_lgamma(0.5 * alpha);
  return std::exp(log_c);
}

double a0_alpha(double alpha) {
  return std::sqrt(std::tgamma(1.0 - alpha / 2.0) / std::tgamma(1.0 + alpha / 2.0));
}

cplx a0_alpha(cplx alpha) {
  return std::exp(0.5 * (complex_lgamma(1.0 - 0.5 * alpha) - complex_lgamma(1.0 + 0.5 * alpha)));
}

cplx c_prime_alpha(cplx alpha) {
  const cplx a0 = a0_alpha(alpha);
  return c_alpha(alpha) * 2.0 / (alpha * a0 * a0);
}

}  // namespace levylab
