#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "levylab/error.hpp"
#include "levylab/matrix_model.hpp"
#include "levylab/stable_random.hpp"

using namespace levylab;

TEST_CASE("n = 1 and exact symmetry") {
  const auto one = build_levy_matrix(1, 1.3, 17);
  CHECK(one.entries.rows() == 1);
  CHECK(std::isfinite(one.entries(0, 0)));
  const auto a = build_levy_matrix(40, 0.7, 3);
  CHECK((a.entries - a.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const auto b = build_levy_matrix(40, 0.7, 3);
  CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_levy_matrix(0, 1.0, 1), DomainError);
  CHECK_THROWS_AS(build_levy_matrix(4, 2.0, 1), DomainError);
}

TEST_CASE("entries above one occur with frequency 1/n") {
  const int n = 1000;
  double hits = 0, total = 0;
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto a = build_levy_matrix(n, 1.2, 100 + s);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i <= j; ++i) {
        hits += std::abs(a.entries(i, j)) >= 1.0;
        total += 1;
      }
    }
  }
  const double p = hits / total;
  // P(|X| >= n^{1/a}) ~ 1/n up to the next order of the stable tail
  CHECK(std::abs(p - 1.0 / n) <= 3.0 * std::sqrt(p / total) + 0.02 / n);
}

TEST_CASE("eigendecomposition") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(1, 1) = 1.0;
  const auto sd = eigendecompose(d);
  CHECK(sd.eigenvalues(0) == doctest::Approx(0.0));
  CHECK(sd.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(std::abs(sd.eigenvectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(sd.eigenvectors(1, 1)) == doctest::Approx(1.0));

  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto a = build_levy_matrix(50, 0.9, s);
    const auto e = eigendecompose(a);
    const double amax = a.entries.cwiseAbs().maxCoeff();
    const Eigen::MatrixXd& U = e.eigenvectors;
    CHECK((U.transpose() * U - Eigen::MatrixXd::Identity(50, 50)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((U * e.eigenvalues.asDiagonal() * U.transpose() - a.entries).cwiseAbs().maxCoeff() <= 1e-6 * amax);
    CHECK(std::abs(e.eigenvalues.sum() - a.entries.trace()) <= 1e-8 * 50 * amax);
    for (int k = 0; k + 1 < 50; ++k) CHECK(e.eigenvalues(k) <= e.eigenvalues(k + 1));
  }
}

TEST_CASE("resolvent diagonal") {
  Eigen::MatrixXd one(1, 1);
  one(0, 0) = 0.3;
  const cplx z(0.1, 0.5);
  CHECK(std::abs(resolvent_diagonal(eigendecompose(one), z).values[0] - 1.0 / (0.3 - z)) < 1e-14);
  CHECK_THROWS_AS(resolvent_diagonal(eigendecompose(one), cplx(0.0, 0.0)), DomainError);

  const auto a = build_levy_matrix(100, 1.0, 8);
  const auto sd = eigendecompose(a);
  for (cplx w : {cplx(0.0, 0.1), cplx(1.5, 0.02), cplx(-3.0, 1.0)}) {
    const auto rd = resolvent_diagonal(sd, w);
    double lhs = 0.0, rhs = 0.0;
    for (const auto& r : rd.values) {
      lhs += r.imag();
      CHECK(r.imag() > 0.0);
      CHECK(std::abs(r) <= 1.0 / w.imag() * (1 + 1e-12));
    }
    for (int j = 0; j < sd.n(); ++j) {
      const double d = sd.eigenvalues(j) - w.real();
      rhs += w.imag() / (d * d + w.imag() * w.imag());
    }
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
    CHECK(fractional_moment(rd, 1.0) == doctest::Approx(rhs / 100).epsilon(1e-10));

    // linear-solve oracle
    const Eigen::MatrixXcd M = a.entries.cast<cplx>() - w * Eigen::MatrixXcd::Identity(100, 100);
    const Eigen::MatrixXcd R = M.partialPivLu().inverse();
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) worst = std::max(worst, std::abs(R(k, k) - rd.values[k]));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("fractional moment, trivial case") {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 1);
  CHECK(fractional_moment(resolvent_diagonal(eigendecompose(zero), cplx(0, 1)), 1.0) == doctest::Approx(1.0));
}

TEST_CASE("empirical gamma") {
  const double alpha = 1.2;
  const auto sd = eigendecompose(build_levy_matrix(200, alpha, 4));
  const auto rd = resolvent_diagonal(sd, cplx(0.3, 0.2));
  auto grid = angular_grid(33);
  const auto g = empirical_gamma(rd, alpha, grid);
  cplx direct = 0.0;
  for (const auto& r : rd.values) direct += std::pow(-cplx(0, 1) * r, alpha / 2.0);
  direct *= std::tgamma(1.0 - alpha / 2.0) / rd.n();
  CHECK(std::abs(g.value(0) - direct) < 1e-12);
  CHECK(std::abs(g(cplx(2.0, 0.0)) - std::pow(2.0, alpha / 2.0) * g.value(0)) < 1e-12);
  // π/4 is the middle node of an odd grid
  const cplx diag = g.value(16);
  CHECK(std::abs(diag - std::pow(2.0, alpha / 4.0) * std::tgamma(1.0 - alpha / 2.0) * fractional_moment(rd, alpha / 2.0)) <
        1e-12);
  CHECK_THROWS_AS(empirical_gamma(rd, alpha, {}), DomainError);
  CHECK_THROWS_AS(right_half_pow(cplx(-1.0, 0.0), 0.5), DomainError);
}

TEST_CASE("spectral measure is symmetric in distribution") {
  double s = 0, s2 = 0;
  const int seeds = 40;
  for (int i = 0; i < seeds; ++i) {
    const auto sd = eigendecompose(build_levy_matrix(100, 0.8, 500 + i));
    double m = 0;
    for (int k = 0; k < sd.n(); ++k) m += sd.eigenvalues(k) > 0 ? 1.0 : -1.0;
    m /= sd.n();
    s += m;
    s2 += m * m;
  }
  const double mean = s / seeds, se = std::sqrt((s2 / seeds - mean * mean) / seeds);
  CHECK(std::abs(mean) <= 3.0 * se + 1e-12);
}

TEST_CASE("near alpha = 2 the bulk is a semicircle after rescaling") {
  // With the tail normalization the spectrum is not on [-2,2]; match the
  // interquartile range of the semicircle and compare the histogram there.
  const auto sd = eigendecompose(build_levy_matrix(2000, 1.9, 77));
  std::vector<double> lam(sd.eigenvalues.data(), sd.eigenvalues.data() + sd.n());
  std::sort(lam.begin(), lam.end());
  const double iqr = lam[3 * lam.size() / 4] - lam[lam.size() / 4];
  // upper quartile of the semicircle on [-2,2]
  double lo = 0.0, hi = 2.0;
  for (int it = 0; it < 100; ++it) {
    const double x = 0.5 * (lo + hi);
    const double F = 0.5 + (x * std::sqrt(4 - x * x) + 4 * std::asin(x / 2)) / (4 * std::numbers::pi);
    (F < 0.75 ? lo : hi) = x;
  }
  const double scale = 2.0 * lo / iqr;
  std::vector<double> hist(20, 0.0);
  for (double l : lam) {
    const double x = l * scale;
    if (x >= -2.0 && x < 2.0) hist[static_cast<int>((x + 2.0) / 0.2)] += 1.0;
  }
  double worst = 0.0;
  for (int b = 0; b < 20; ++b) {
    const double c = -2.0 + 0.2 * (b + 0.5);
    worst = std::max(worst, std::abs(hist[b] / (lam.size() * 0.2) - std::sqrt(4 - c * c) / (2 * std::numbers::pi)));
  }
  CHECK(worst <= 0.08);
}
