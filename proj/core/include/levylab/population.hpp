#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "levylab/homogeneous.hpp"

namespace levylab {

using cplx = std::complex<double>;

struct PopulationConfig {
  int pool_size = 20000;
  int sweeps = 30;              ///< fixed equilibration sweeps
  int max_extra_sweeps = 30;    ///< further sweeps allowed while the check fails
  int K = 100;                  ///< Poisson truncation
  bool compensate_tail = true;  ///< add (mean of discarded weights) * (pool mean)
  double check_tolerance = 0.01;
  std::uint64_t seed = 1;
};

/// Samples approximating the law of R★(z) in
///   R★ = -(z + Σ_k ξ_k R_k)^{-1}.
struct PopulationPool {
  cplx z;
  double alpha = 1.0;
  int K = 0;
  int iterations = 0;
  bool converged = false;              ///< moment check met within the sweep budget
  std::vector<cplx> samples;
  std::vector<double> moment_history;  ///< Ê (Im R)^{α/2} after each sweep
};

/// Population dynamics from the pool -1/z. Each sweep draws its weights and
/// resampling indices sequentially from its own stream, then updates all samples
/// in parallel, so results do not depend on scheduling.
PopulationPool population_dynamics(cplx z, double alpha, const PopulationConfig& cfg = {});

/// Ê (Im R)^{α/2} over the pool.
double imag_moment(const std::vector<cplx>& samples, double alpha);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;  ///< Monte Carlo standard error
};

/// Mean of fn over `replicates` independent pools. The standard error comes from the
/// spread of the per-pool means, which accounts for correlations inside a pool.
Estimate replicate_estimate(const std::vector<PopulationPool>& replicates,
                            const std::function<double(cplx)>& fn);

/// Independent pools with seeds derived from cfg.seed.
std::vector<PopulationPool> population_replicates(cplx z, double alpha, int replicates,
                                                  const PopulationConfig& cfg = {});

/// γ_z(u) = Γ(1-α/2) Ê (-iR . u)^{α/2} on `thetas`, averaged over the pools.
HomogeneousFn population_gamma(const std::vector<PopulationPool>& replicates, const std::vector<double>& thetas);

struct ClosureCheck {
  double w = 0.0;
  cplx lhs;          ///< Ê exp(-w Σ_k ξ_k W_k), W_k = -i R_k drawn from the pool
  double lhs_se = 0.0;
  cplx rhs;          ///< exp(-Γ(1-α/2) w^{α/2} Ê W^{α/2}), exact for the pool's law
};

/// Lévy–Khintchine closure at scale w, estimated from `draws` fresh weight sets.
/// The discarded weights are compensated by their mean times Ê W.
ClosureCheck lk_closure(const PopulationPool& pool, double w, int draws, int K, std::uint64_t seed);

}  // namespace levylab
