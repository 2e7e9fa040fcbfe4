#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace levylab {

using cplx = std::complex<double>;

/// Scalar kernel of P on [0, π/2]²: for ψ > ω
///   k(ω,ψ) = sin(ψ-ω)^{α-1} ∫_ψ^{π/2} (sin 2θ)^{α/2-1} sin(θ-ψ)^{-α/2} sin(θ-ω)^{-α/2} dθ,
/// and k(ω,ψ) = k(π/2-ω, π/2-ψ) for ψ < ω. Throws DomainError on the diagonal.
cplx kernel_k(cplx alpha, double omega, double psi, int level = 4);

struct KernelQuadrature {
  int theta_level = 4;     ///< tanh-sinh level of the θ-integral inside k
  int singular_level = 3;  ///< tanh-sinh level on cells touching ω_i, 0 or π/2
  int gauss_nodes = 6;     ///< Gauss–Legendre nodes on the other cells
};

/// Nyström discretization on a symmetric mesh graded toward 0 and π/2.
struct NystromOperator {
  cplx alpha;
  double kappa = 0.5;
  std::vector<double> nodes;    ///< mesh points including 0 and π/2; π/4 is never a node
  std::vector<double> weights;  ///< ∫ of each hat function
  int blocks = 1;               ///< 1 for P, 3 for S and H (order 0, 1, i)
  Eigen::MatrixXcd matrix;
  std::string diagonal_rule;    ///< how the diagonal singularity was treated
  KernelQuadrature quadrature;
  int n_nodes() const noexcept { return static_cast<int>(nodes.size()); }
};

/// P_κ with entries W_ij = ∫ k(ω_i,ψ) φ_j(ψ) dψ for hat functions φ_j, conjugated by
/// |cos - sin|^κ. `n_nodes` must be even and at least 16.
NystromOperator assemble_P(cplx alpha, int n_nodes, double kappa = 0.5, const KernelQuadrature& q = {});

/// S = M diag(P, P, P) N in 3×3 block form.
NystromOperator assemble_S(cplx alpha, int n_nodes, double kappa = 0.5, const KernelQuadrature& q = {});

/// H_α = c'_α S J, where J reflects the angle θ -> π/2 - θ and exchanges the
/// components 1 and i (the derivative of f(ǔ) along 1 is the derivative of f along i).
NystromOperator assemble_H(cplx alpha, int n_nodes, double kappa = 0.5, const KernelQuadrature& q = {});

/// Eigenvalues sorted by decreasing modulus (LAPACK zgeev).
std::vector<cplx> nystrom_eigenvalues(const Eigen::MatrixXcd& m);

/// Π (1 - μ^m).
cplx det_from_eigenvalues(const std::vector<cplx>& mu, int m);
/// det(I - A^m) by LU.
cplx direct_det(const Eigen::MatrixXcd& a, int m);

/// Smallest power making H^m trace class for Re α's band: 2^{ℓ+1} on
/// V_ℓ = {2^{-ℓ} < Re α < 2^{-ℓ+1}}, 3·2^{ℓ+1} on W_ℓ = V_ℓ/3 (ℓ ≥ 1). Throws DomainError
/// when Re α lies in neither, which includes 1/2 and 1.
int band_power(cplx alpha);

struct FredholmResult {
  cplx alpha;
  int m = 2;
  cplx det_value;
  int grid_size = 0;
  double refinement_delta = 0.0;  ///< |det_{2n} - det_n| / |det_{2n}|
};

/// det(I - H^m) = Π(1 - μ_i^m) on H's grid, with refinement_delta from a re-assembly
/// on twice the nodes. m must be even and at least band_power(α).
FredholmResult fredholm_det(const NystromOperator& H, int m);

struct ScanPoint {
  FredholmResult result;
  bool candidate = false;  ///< local minimum of |det| along the grid
  std::string error;       ///< non-empty when this point failed
};

/// det(I - H^m) along a real α grid, m from band_power. Points within 0.02 of 1/2 or 1
/// are rejected up front.
std::vector<ScanPoint> alpha_scan(const std::vector<double>& alpha_grid, int n_nodes, double kappa = 0.5,
                                  const KernelQuadrature& q = {});

/// CSV: re_alpha,im_alpha,m,n_nodes,det_re,det_im,abs_det,refinement_delta
void write_scan_csv(const std::vector<ScanPoint>& scan, const std::string& path);

/// Shape of the kernel bound for Re α in the three regimes (without the constant).
double kernel_bound_shape(double re_alpha, double omega, double psi);

struct KernelBoundFit {
  double alpha = 1.0;
  double C = 0.0;              ///< max |k| / shape on the grid
  double C_refined = 0.0;      ///< same on twice the grid with a finer kernel rule
  double relative_change = 0.0;
  double worst_omega = 0.0, worst_psi = 0.0;
};

/// Fits C on a grid×grid set of cell midpoints of (0, π/2)², skipping the diagonal.
KernelBoundFit fit_kernel_bound(double alpha, int grid = 50, int level = 4);

}  // namespace levylab
