#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

#include "levylab/error.hpp"
#include "levylab/fixed_point.hpp"
#include "levylab/io.hpp"
#include "levylab/population.hpp"
#include "levylab/special.hpp"

using namespace levylab;

namespace {

SolverConfig small_solver() {
  SolverConfig s;
  s.grid_size = 33;
  return s;
}

HomogeneousFn random_cone_fn(double alpha, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-0.3, 0.3);
  const double c1 = U(rng), c2 = U(rng), c3 = U(rng);
  return HomogeneousFn::sample(alpha / 2.0, angular_grid(m), [&](double t) {
    return cplx(1.0 + c1 * std::cos(2 * t) + c2 * std::sin(4 * t), c3 * std::sin(2 * t));
  });
}

}  // namespace

TEST_CASE("gamma_0 is a fixed point of G_0") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto g0 = gamma_zero(alpha, angular_grid(33));
    const auto G = eval_G(0.0, g0);
    INFO("alpha=" << alpha);
    CHECK(sup_distance(G, g0) <= 1e-3);
    CHECK(sup_distance(G, g0) <= 1e-6 * g0.sup_norm());
  }
  CHECK(gamma_zero(1.0, angular_grid(33)).value(0).real() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("scaling identity of F_h") {
  const double alpha = 1.2, t = 2.0;
  const auto g = random_cone_fn(alpha, 33, 3);
  for (cplx h : {cplx(0.5, 0.3), cplx(1.0, -0.5), cplx(0.2, 1.0)}) {
    const auto lhs = eval_F(h, std::pow(t, alpha / 2) * g);
    const auto rhs = std::pow(t, -alpha / 2) * eval_F(h / t, g);
    INFO("h=" << h);
    CHECK(sup_distance(lhs, rhs) <= 1e-6);
  }
}

TEST_CASE("F_h norm bound constant is finite across a test grid") {
  const double alpha = 1.0;
  double c = 0.0;
  for (double reh : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (double scale : {0.5, 1.0, 2.0}) {
      const auto g = cplx(scale) * random_cone_fn(alpha, 33, 11);
      const double n = eval_F(cplx(reh, 0.3), g).sup_norm();
      const double shape = std::pow(reh, -alpha / 2) + g.sup_norm() * std::pow(reh, -alpha);
      c = std::max(c, n / shape);
    }
  }
  CHECK(std::isfinite(c));
  CHECK(c < 10.0);
}

TEST_CASE("quadrature refinement stays within the reported error") {
  QuadratureConfig q;
  const auto f = random_cone_fn(0.9, 17, 21);
  QuadratureReport rep;
  const auto G = eval_G(cplx(0.1, 0.2), f, q, &rep);
  const auto Gr = eval_G(cplx(0.1, 0.2), f, refined(q));
  CHECK(rep.error_estimate > 0.0);
  CHECK(sup_distance(G, Gr) <= 3.0 * rep.error_estimate);
  QuadratureConfig strict = q;
  strict.estimate_error = true;
  strict.tolerance = 1e-16;
  CHECK_THROWS_AS(eval_G(cplx(0.1, 0.2), f, strict), QuadratureError);
}

TEST_CASE("solver at z = 0 and guards") {
  const auto sol = solve_gamma_star(0.0, 1.0, small_solver());
  CHECK(sol.iterations <= 5);
  CHECK(sup_distance(sol.gamma, gamma_zero(1.0, sol.gamma.thetas())) <= 1e-6);
  CHECK_THROWS_AS(solve_gamma_star(cplx(0.0, 0.6), 1.0, small_solver()), DomainError);
  CHECK_THROWS_AS(solve_gamma_star(cplx(0.1, -0.1), 1.0, small_solver()), DomainError);
  CHECK_THROWS_AS(solve_gamma_star(cplx(0.1, 0.0), 1.0, small_solver()), DomainError);
}

TEST_CASE("pure imaginary z keeps the (1.u)^{a/2} shape") {
  const double alpha = 0.8, eta = 0.2;
  const auto g = gamma_pure_imaginary(eta, alpha, angular_grid(33));
  CHECK(sup_distance(eval_G(cplx(0.0, eta), g), g) <= 1e-6);
  const auto sol = solve_gamma_star(cplx(0.0, eta), alpha, small_solver());
  CHECK(sup_distance(sol.gamma, g) <= 1e-6);
}

TEST_CASE("damped residuals decrease monotonically") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    SolverConfig s = small_solver();
    s.damping = 0.5;
    const auto g0 = gamma_zero(alpha, angular_grid(33));
    const auto sol = solve_gamma_star(cplx(0.1, 0.2), alpha, s, &g0);
    CHECK(sol.residual <= s.tolerance);
    for (std::size_t k = 1; k < sol.residual_history.size(); ++k) {
      CHECK(sol.residual_history[k] <= sol.residual_history[k - 1] * (1 + 1e-12));
    }
  }
}

TEST_CASE("continuation along the imaginary axis") {
  std::vector<cplx> path;
  for (int k = 0; k <= 6; ++k) path.push_back(cplx(0.0, 0.05 * k));
  const auto sols = continuation(path, 1.0, small_solver());
  REQUIRE(sols.size() == path.size());
  for (std::size_t k = 0; k < sols.size(); ++k) {
    CHECK(sols[k].residual <= 1e-8);
    CHECK(sols[k].gamma.in_cone());
    if (k > 0) CHECK(sup_distance(sols[k].gamma, sols[k - 1].gamma) <= 0.1);
  }
}

TEST_CASE("s_p closed forms") {
  for (double p : {0.5, 1.0, 2.0}) {
    const double eta = 0.3;
    CHECK(std::abs(s_p(cplx(0, eta), 0.0, p, 1.0) - std::pow(eta, -p)) < 1e-10 * std::pow(eta, -p));
  }
  const cplx v = s_p(cplx(0.0, 0.2), 0.7, 1.0, 1.3);
  CHECK(std::abs(v.imag()) < 1e-14 * std::abs(v));
}

TEST_CASE("r_p is bounded by c / Re(h)^p") {
  const auto g = gamma_zero(1.0, angular_grid(33));
  for (double p : {0.5, 1.0, 2.0}) {
    double c = 0.0;
    for (double reh : {0.05, 0.2, 1.0, 4.0}) {
      for (double imh : {-1.0, 0.0, 1.0}) {
        const cplx h(reh, imh), z = cplx(0, 1) * h;
        c = std::max(c, std::abs(r_p(z, g, p)) * std::pow(reh, p));
      }
    }
    INFO("p=" << p);
    CHECK(std::isfinite(c));
    CHECK(c < 10.0);
  }
}

TEST_CASE("solution near zero matches population dynamics") {
  const double alpha = 1.0;
  const cplx z(0.0, 0.05);
  const auto sol = solve_gamma_star(z, alpha, small_solver());
  CHECK(sup_distance(sol.gamma, gamma_zero(alpha, sol.gamma.thetas())) <= 0.1);
  // γ(e^{iπ/4}) = 2^{α/4} Γ(1-α/2) E (Im R)^{α/2}
  const double from_gamma =
      sol.gamma.at_angle(std::numbers::pi / 4).real() / (std::pow(2.0, alpha / 4) * std::tgamma(1 - alpha / 2));
  PopulationConfig pc;
  pc.pool_size = 10000;
  pc.seed = 99;
  const auto pools = population_replicates(z, alpha, 6, pc);
  const auto est = replicate_estimate(pools, [&](cplx r) { return std::pow(r.imag(), alpha / 2); });
  CHECK(std::abs(est.mean - from_gamma) <= 3.0 * est.se);
}

TEST_CASE("linearization maps gamma_0 to minus itself") {
  // the scaling mode: G_0 commutes with f -> t^{α/2} f up to t^{-α/2}
  const double alpha = 1.3;
  const auto g0 = gamma_zero(alpha, angular_grid(33));
  CHECK(sup_distance(apply_K(g0), cplx(-1.0) * g0) <= 1e-6);
}

TEST_CASE("density is symmetric and extrapolation is linear") {
  const auto [v, err] = richardson({0.1, 0.05, 0.025}, {1.1, 1.05, 1.025});
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(err) < 1e-12);
  const auto pts = spectral_density({0.1, -0.1, 0.2, -0.2, 0.3, -0.3}, 1.0);
  REQUIRE(pts.size() == 6);
  for (int k = 0; k < 6; k += 2) {
    CHECK(pts[k].E == -pts[k + 1].E);
    CHECK(std::abs(pts[k].f_star - pts[k + 1].f_star) <= 1e-4);
    CHECK(pts[k].f_star > 0.0);
  }
}

TEST_CASE("checkpoint and density CSV round trips") {
  const auto dir = std::filesystem::temp_directory_path() / "levylab_fp_test";
  std::filesystem::create_directories(dir);
  const auto sol = solve_gamma_star(cplx(0.0, 0.1), 0.9, small_solver());
  QuadratureConfig q;
  q.theta_level = 4;
  save_checkpoint(sol, q, (dir / "cp.json").string());
  QuadratureConfig q2;
  const auto back = load_checkpoint((dir / "cp.json").string(), &q2);
  CHECK(back.z == sol.z);
  CHECK(back.alpha == sol.alpha);
  CHECK(back.residual == sol.residual);
  CHECK(back.gamma.values() == sol.gamma.values());
  CHECK(q2.theta_level == 4);

  std::vector<DensityPoint> pts(2);
  pts[0] = {0.5, 0.123456789, 0.025, 1e-5, {}};
  pts[1] = {-0.5, 0.1 / 3.0, 0.025, 2e-5, {}};
  write_density_csv(pts, (dir / "d.csv").string());
  const auto rd = read_density_csv((dir / "d.csv").string());
  REQUIRE(rd.size() == 2);
  CHECK(rd[1].f_star == pts[1].f_star);
  CHECK(rd[0].extrapolation_error == pts[0].extrapolation_error);
  std::filesystem::remove_all(dir);
}
