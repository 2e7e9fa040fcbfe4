#include <doctest.h>

#include <cmath>

#include "levylab/fixed_point.hpp"
#include "levylab/population.hpp"

using namespace levylab;

TEST_CASE("pure imaginary pools stay pure imaginary") {
  PopulationConfig pc;
  pc.pool_size = 5000;
  pc.sweeps = 10;
  pc.max_extra_sweeps = 0;
  const double eta = 0.1;
  const auto pool = population_dynamics(cplx(0.0, eta), 0.9, pc);
  for (const auto& r : pool.samples) {
    REQUIRE(std::abs(r.real()) <= 1e-10 / eta);
    REQUIRE(r.imag() > 0.0);
  }
}

TEST_CASE("Herglotz closure, determinism and the moment check") {
  PopulationConfig pc;
  pc.pool_size = 5000;
  pc.seed = 17;
  const cplx z(0.3, 0.2);
  const auto a = population_dynamics(z, 1.3, pc);
  const auto b = population_dynamics(z, 1.3, pc);
  CHECK(a.samples == b.samples);
  CHECK(a.converged);
  CHECK(a.iterations >= pc.sweeps);
  CHECK(a.moment_history.size() == static_cast<std::size_t>(a.iterations));
  for (const auto& r : a.samples) {
    REQUIRE(r.imag() > 0.0);
    REQUIRE(r.imag() <= 1.0 / z.imag() * (1 + 1e-12));
  }
}

TEST_CASE("Levy-Khintchine closure on an equilibrated pool") {
  PopulationConfig pc;
  pc.pool_size = 10000;
  pc.seed = 3;
  const auto pool = population_dynamics(cplx(0.0, 0.2), 1.0, pc);
  for (double w : {1.0, 2.0}) {
    const auto c = lk_closure(pool, w, 40000, 200, 1234);
    INFO("w=" << w);
    CHECK(std::abs(c.lhs.real() - c.rhs.real()) <= 3.0 * c.lhs_se);
  }
}

TEST_CASE("moment identities against the quadrature fixed point") {
  const double alpha = 1.0;
  const cplx z(0.0, 0.1);
  SolverConfig s;
  s.grid_size = 33;
  const auto sol = solve_gamma_star(z, alpha, s);
  PopulationConfig pc;
  pc.pool_size = 10000;
  pc.seed = 2024;
  const auto pools = population_replicates(z, alpha, 6, pc);
  for (double p : {1.0, 2.0}) {
    const auto abs_p = replicate_estimate(pools, [p](cplx r) { return std::pow(std::abs(r), p); });
    const auto ri = replicate_estimate(pools, [p](cplx r) { return std::pow(-cplx(0, 1) * r, p).real(); });
    const cplx rp = r_p(z, sol.gamma, p);
    const cplx sp = s_p(z, sol.gamma.value(0), p, alpha);
    INFO("p=" << p);
    CHECK(std::abs(abs_p.mean - rp.real()) <= 3.0 * abs_p.se);
    CHECK(std::abs(ri.mean - sp.real()) <= 3.0 * ri.se);
  }
}
