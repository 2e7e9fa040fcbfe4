#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "levylab/error.hpp"
#include "levylab/localization.hpp"
#include "levylab/matrix_model.hpp"

using namespace levylab;

namespace {

SpectralDecomposition diag01() {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(1, 1) = 1.0;
  return eigendecompose(d);
}

}  // namespace

TEST_CASE("whole line gives the uniform profile") {
  const auto sd = eigendecompose(build_levy_matrix(60, 1.1, 2));
  const auto st = interval_stats(sd, -1e300, 1e300, 1.1);
  CHECK(st.count == 60);
  for (double p : st.P) CHECK(p == doctest::Approx(1.0 / 60).epsilon(1e-10));
  CHECK(st.Q == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::accumulate(st.P.begin(), st.P.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two by two hand computation") {
  const auto st = interval_stats(diag01(), -0.5, 0.5, 1.0);
  REQUIRE(st.count == 1);
  CHECK(st.P[0] == doctest::Approx(1.0));
  CHECK(st.P[1] == doctest::Approx(0.0));
  CHECK(st.Q == doctest::Approx(2.0));
  CHECK(st.Pi == doctest::Approx(2.0));

  const auto rd = resolvent_diagonal(diag01(), cplx(0.0, 0.5));
  const auto [lhs, rhs] = resolvent_upper_bound(rd, st);
  CHECK(lhs == doctest::Approx(2.0));
  CHECK(lhs <= rhs);
}

TEST_CASE("empty interval is a distinct result") {
  const auto st = interval_stats(diag01(), 0.2, 0.4, 1.0);
  CHECK(st.empty());
  CHECK(std::isfinite(st.Q));
  const auto rd = resolvent_diagonal(diag01(), cplx(0.3, 0.1));
  CHECK_THROWS_AS(resolvent_upper_bound(rd, st), DomainError);
  CHECK_THROWS_AS(renyi_divergence_stat(st, 2.0), DomainError);
  CHECK_THROWS_AS(interval_stats(diag01(), 1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("closed interval membership") {
  const auto st = interval_stats(diag01(), 0.0, 1.0, 1.0);
  CHECK(st.count == 2);
}

TEST_CASE("sandwich, Renyi identities and the Holder bound on random samples") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const double alpha = 0.4 + 0.012 * s;
    const auto sd = eigendecompose(build_levy_matrix(50, alpha, 900 + s));
    const auto st = interval_stats(sd, -0.5, 0.5, alpha);
    if (st.empty()) continue;
    CHECK(st.Q >= 1.0 - 1e-12);
    CHECK(st.Q <= 50.0 + 1e-12);
    CHECK(st.Q <= st.Pi * (1 + 1e-12));
    CHECK(st.Pi <= st.Q * st.count * (1 + 1e-12));
    CHECK(renyi_divergence_stat(st, 2.0) == doctest::Approx(st.Q).epsilon(1e-12));
    CHECK(renyi_divergence_stat(st, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(renyi_divergence_stat(st, alpha / 2.0) == doctest::Approx(st.renyi_half).epsilon(1e-12));
    CHECK(holder_lower_bound(st, alpha) <= st.Q * (1 + 1e-10));
  }
  IntervalStats uniform;
  uniform.n = 8;
  uniform.count = 1;
  uniform.P.assign(8, 1.0 / 8);
  for (double p : {0.3, 1.5, 2.0, 4.0}) CHECK(renyi_divergence_stat(uniform, p) == doctest::Approx(1.0));
}

TEST_CASE("resolvent upper bound holds on sampled matrices") {
  const double eta = 0.1;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto sd = eigendecompose(build_levy_matrix(200, 1.0, 40 + s));
    const auto st = interval_stats(sd, -eta, eta, 1.0);
    if (st.empty()) continue;
    const auto [lhs, rhs] = resolvent_upper_bound(resolvent_diagonal(sd, cplx(0.0, eta)), st);
    CHECK(lhs <= rhs);
  }
  const auto sd = eigendecompose(build_levy_matrix(30, 1.0, 1));
  const auto st = interval_stats(sd, -0.5, 0.5, 1.0);
  CHECK_THROWS_AS(resolvent_upper_bound(resolvent_diagonal(sd, cplx(0.1, 0.5)), st), DomainError);
}

TEST_CASE("Q is invariant under column signs, permutations and re-orthonormalization") {
  auto sd = eigendecompose(build_levy_matrix(80, 0.9, 12));
  const auto ref = interval_stats(sd, -1.0, 1.0, 0.9);
  REQUIRE_FALSE(ref.empty());

  SpectralDecomposition flipped = sd;
  for (int k = 0; k < 80; k += 3) flipped.eigenvectors.col(k) *= -1.0;
  CHECK(interval_stats(flipped, -1.0, 1.0, 0.9).Q == doctest::Approx(ref.Q).epsilon(1e-12));

  // permuting the coordinates permutes P and leaves Q unchanged
  SpectralDecomposition perm = sd;
  std::vector<int> order(80);
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());
  for (int i = 0; i < 80; ++i) perm.eigenvectors.row(i) = sd.eigenvectors.row(order[i]);
  CHECK(interval_stats(perm, -1.0, 1.0, 0.9).Q == doctest::Approx(ref.Q).epsilon(1e-12));

  SpectralDecomposition noisy = sd;
  noisy.eigenvectors += 1e-8 * Eigen::MatrixXd::Random(80, 80);
  noisy.eigenvectors = Eigen::HouseholderQR<Eigen::MatrixXd>(noisy.eigenvectors).householderQ();
  // QR may flip signs; Q only depends on squares
  CHECK(interval_stats(noisy, -1.0, 1.0, 0.9).Q == doctest::Approx(ref.Q).epsilon(1e-6));
}
