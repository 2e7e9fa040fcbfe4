#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levylab/error.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/special.hpp"
#include "levylab/stable_laplace.hpp"

using namespace levylab;

namespace {

// Trapezoid in s = log r; exponentially convergent for these smooth integrands.
cplx brute_laplace(double p, cplx a, cplx b, double alpha) {
  const double h = 2e-3;
  cplx acc = 0.0;
  for (double s = -60.0; s <= 12.0; s += h) {
    const double r = std::exp(s);
    acc += std::pow(r, p) * std::exp(-a * r - b * std::pow(r, alpha / 2.0));
  }
  return acc * h;
}

}  // namespace

TEST_CASE("Gauss-Legendre is exact for polynomials") {
  const auto& g = gauss_legendre(6);
  for (int k = 0; k <= 11; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.w[i] * std::pow(g.x[i], k);
    CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }
}

TEST_CASE("tanh-sinh with an endpoint singularity") {
  for (double a : {0.2, 0.5, 0.9}) {
    const auto r = tanh_sinh_for_singularity(5, a);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::pow(r.from_lo[i], -a) * std::pow(r.from_hi[i], -a / 2);
    const double exact = std::tgamma(1 - a) * std::tgamma(1 - a / 2) / std::tgamma(2 - 1.5 * a);
    CHECK(s == doctest::Approx(exact).epsilon(1e-9));
  }
  CHECK_THROWS_AS(tanh_sinh_for_singularity(3, 1.0), DomainError);
}

TEST_CASE("graded mesh") {
  const auto m = graded_mesh(0.0, 1.0, 10, 2.0);
  REQUIRE(m.size() == 11);
  CHECK(m.front() == 0.0);
  CHECK(m.back() == doctest::Approx(1.0));
  for (std::size_t j = 0; j < m.size(); ++j) CHECK(m[j] + m[m.size() - 1 - j] == doctest::Approx(1.0));
  CHECK(m[1] - m[0] < m[5] - m[4]);
  CHECK_THROWS_AS(graded_mesh(0, 1, 0, 2.0), DomainError);
}

TEST_CASE("Gamma function and constants") {
  for (double x : {0.3, 1.0, 2.5, 7.2}) CHECK(complex_gamma(x).real() == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
  const cplx z(0.4, 3.0);
  CHECK(std::abs(complex_gamma(z + 1.0) - z * complex_gamma(z)) < 1e-12 * std::abs(complex_gamma(z + 1.0)));
  CHECK(std::abs(std::exp(complex_lgamma(z)) - complex_gamma(z)) < 1e-12 * std::abs(complex_gamma(z)));
  CHECK(c_alpha(1.0) == doctest::Approx(1.0 / (std::sqrt(2.0) * std::numbers::pi)).epsilon(1e-14));
  CHECK(c_alpha(1.0) == doctest::Approx(0.22508).epsilon(1e-4));
  CHECK(a0_alpha(1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(c_prime_alpha(1.0).real() == doctest::Approx(0.22508).epsilon(1e-4));
  CHECK(std::abs(c_alpha(cplx(1.3, 0.0)) - c_alpha(1.3)) < 1e-13);
}

TEST_CASE("Laplace-stable integral against closed forms and a brute-force oracle") {
  const double alpha = 1.2;
  CHECK(std::abs(laplace_stable(1.5, 2.0, 0.0, alpha) - std::tgamma(1.5) * std::pow(2.0, -1.5)) < 1e-13);
  const double q = 1.5 / (alpha / 2);
  CHECK(std::abs(laplace_stable(1.5, 0.0, 0.7, alpha) - (2.0 / alpha) * std::tgamma(q) * std::pow(0.7, -q)) < 1e-12);
  for (auto [a, b] : {std::pair<cplx, cplx>{cplx(1.0, 0.5), cplx(0.3, -0.2)}, {cplx(0.05, -2.0), cplx(1.0, 0.4)},
                      {cplx(3.0, 0.0), cplx(0.0, 2.0)}, {cplx(0.2, 0.0), cplx(2.0, 0.0)}}) {
    for (double p : {0.5, 1.0, 2.0}) {
      const cplx v = laplace_stable(p, a, b, alpha);
      const cplx ref = brute_laplace(p, a, b, alpha);
      INFO("p=" << p << " a=" << a << " b=" << b);
      CHECK(std::abs(v - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
      CHECK(std::abs(v) <= laplace_stable_bound(p, a, b, alpha) * (1 + 1e-9));
    }
  }
  CHECK_THROWS_AS(laplace_stable(1.0, cplx(-1.0, 0.0), 1.0, alpha), DomainError);
  CHECK_THROWS_AS(laplace_stable(0.0, 1.0, 1.0, alpha), DomainError);
}

TEST_CASE("Laplace-stable covariance") {
  const double alpha = 0.8, p = 0.7, s = 3.0;
  const cplx a(0.4, 1.1), b(0.9, 0.3);
  const cplx lhs = laplace_stable(p, a * s, b * std::pow(s, alpha / 2), alpha);
  CHECK(std::abs(lhs - std::pow(s, -p) * laplace_stable(p, a, b, alpha)) < 1e-10 * std::abs(lhs));
}
