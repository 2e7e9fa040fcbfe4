#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levylab/homogeneous.hpp"

namespace levylab {

/// Symmetric n×n matrix with A_ij = n^{-1/α} X_ij, X_ij i.i.d. symmetric α-stable.
struct LevyMatrix {
  int n = 0;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd entries;
};

/// Eigenvalues ascending (index 0 is the smallest, λ_n in decreasing labels) and orthonormal eigenvectors
/// stored as columns.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  int n() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

struct ResolventDiagonal {
  std::complex<double> z;
  std::vector<std::complex<double>> values;
  int n() const noexcept { return static_cast<int>(values.size()); }
};

LevyMatrix build_levy_matrix(int n, double alpha, std::uint64_t seed);

/// Full symmetric eigendecomposition (LAPACK dsyevd). Throws ConvergenceError if
/// the solver does not converge.
SpectralDecomposition eigendecompose(const Eigen::MatrixXd& a);
SpectralDecomposition eigendecompose(const LevyMatrix& a);

/// R_kk(z) = Σ_j U_kj² / (λ_j - z), Im z > 0.
ResolventDiagonal resolvent_diagonal(const SpectralDecomposition& sd, std::complex<double> z);

/// γ_z(u) = Γ(1-α/2) (1/n) Σ_k (-i R_kk(z) . u)^{α/2}, sampled on `thetas`.
HomogeneousFn empirical_gamma(const ResolventDiagonal& rd, double alpha, const std::vector<double>& thetas);

/// y_z(β) = (1/n) Σ_k (Im R_kk)^β.
double fractional_moment(const ResolventDiagonal& rd, double beta);

/// (1/n) Σ_k |R_kk|².
double mean_abs_square(const ResolventDiagonal& rd);

/// Principal branch x^p for Re x >= 0; throws DomainError if Re x < -1e-12 |x|.
std::complex<double> right_half_pow(std::complex<double> x, double p);

/// CSV with columns index,eigenvalue.
void write_spectrum_csv(const SpectralDecomposition& sd, const std::string& path);

}  // namespace levylab
