#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace levylab {

/// Random engine used throughout. Every Monte Carlo task owns its own stream.
using RngStream = std::mt19937_64;

/// 64-bit finalizer of splitmix64; used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Independent sub-stream for task `task` of the run seeded with `master`.
RngStream derive_stream(std::uint64_t master, std::uint64_t task);
RngStream derive_stream(std::uint64_t master, std::uint64_t task, std::uint64_t subtask);

/// Symmetric α-stable law with E exp(itX) = exp(-sigma_alpha |t|^alpha).
class StableLaw {
 public:
  /// Normalization for which P(|X| >= t) ~ t^{-alpha}.
  explicit StableLaw(double alpha);
  StableLaw(double alpha, double sigma_alpha);

  double alpha() const noexcept { return alpha_; }
  /// The value σ^α.
  double sigma_alpha() const noexcept { return sigma_alpha_; }
  double sigma() const noexcept { return sigma_; }

  /// π / (2 sin(πα/2) Γ(α)).
  static double tail_normalization(double alpha);

 private:
  double alpha_;
  double sigma_alpha_;
  double sigma_;
};

/// One draw by the Chambers–Mallows–Stuck construction, scaled by σ.
double sample_standard_stable(const StableLaw& law, RngStream& rng);

double sample_gaussian(RngStream& rng);

/// The K largest points of the Poisson process with intensity (α/2) x^{-α/2-1} dx,
/// realized as ξ_k = (E_1 + ... + E_k)^{-2/α}.
struct PoissonWeights {
  double alpha = 1.0;
  std::vector<double> xi;

  std::size_t truncation() const noexcept { return xi.size(); }

  /// Conditional mean of the sum of the discarded points ξ_{K+1}, ξ_{K+2}, ...
  /// given ξ_K: ∫_0^{ξ_K} x (α/2) x^{-α/2-1} dx.
  double tail_mean() const;

  double sum() const;
};

PoissonWeights poisson_weights(double alpha, int K, RngStream& rng);

}  // namespace levylab
