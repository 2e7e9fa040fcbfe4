#pragma once

#include <utility>
#include <vector>

#include "levylab/matrix_model.hpp"

namespace levylab {

/// Eigenvector statistics over the eigenvalues in a closed interval I = [a,b].
/// When no eigenvalue lies in I the record is empty and carries no metrics.
struct IntervalStats {
  double a = 0.0;
  double b = 0.0;
  int n = 0;
  int count = 0;
  std::vector<double> P;   ///< P_I(k), k = 1..n
  double Q = 0.0;          ///< n Σ P_I(k)²
  double Pi = 0.0;         ///< (n/|Λ_I|) Σ_u ‖u‖_4⁴
  double renyi_half = 0.0; ///< n^{α/2-1} Σ P_I(k)^{α/2}

  bool empty() const noexcept { return count == 0; }
};

IntervalStats interval_stats(const SpectralDecomposition& sd, double a, double b, double alpha);

/// (Q_I, (n|I|/|Λ_I|)² (1/n) Σ (Im R_kk)²) for the pairing z = λ + iη, I = [λ-η, λ+η].
std::pair<double, double> resolvent_upper_bound(const ResolventDiagonal& rd, const IntervalStats& stats);

/// n^{p-1} Σ_k P_I(k)^p.
double renyi_divergence_stat(const IntervalStats& stats, double p);

/// Lower bound on Q_I obtained from Hölder's inequality between the exponents α/2, 1
/// and 2: Q_I >= R^{-q/p'} with p' = 2 - α/2, q its conjugate and R = renyi_half.
double holder_lower_bound(const IntervalStats& stats, double alpha);

}  // namespace levylab
