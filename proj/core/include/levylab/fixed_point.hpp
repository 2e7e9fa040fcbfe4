#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "levylab/homogeneous.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/stable_laplace.hpp"

namespace levylab {

using cplx = std::complex<double>;

/// Discretization of the angular and radial integrals behind F_h, G_z and r_p.
struct QuadratureConfig {
  int theta_level = 3;       ///< tanh-sinh level in θ (step 2^{-level})
  int psi_level = 3;         ///< tanh-sinh level in ψ = arg(e^{iθ} + y u)
  int y_nodes = 32;          ///< Gauss–Legendre nodes per half for the Ψ-free y-integral
  int table_points = 256;    ///< profile samples per half quadrant, graded toward π/4
  LaplaceRule laplace;       ///< r-integral rule
  bool estimate_error = false;
  double tolerance = 1e-4;   ///< largest accepted error estimate (absolute)
};

/// The rule one level coarser in every direction, used for error estimates.
QuadratureConfig coarsened(const QuadratureConfig& q);
/// The rule one level finer in every direction.
QuadratureConfig refined(const QuadratureConfig& q);

struct QuadratureReport {
  double error_estimate = 0.0;
  double worst_angle = 0.0;
};

/// A function of ψ in [0, π/2] sampled on a grid graded toward the diagonal ψ = π/4,
/// where Ψ(h.e^{iψ}, ·) has a ridge of width ~ 1/|Im h|. Read back by 4-point
/// Lagrange interpolation in the graded variable.
class DiagonalProfile {
 public:
  DiagonalProfile(int points, const std::function<cplx(double)>& fn);
  cplx operator()(double psi) const;
  int points() const noexcept { return points_; }

 private:
  int points_;
  std::vector<cplx> left_, right_;  // index i at ψ = π/4 ∓ (π/4)(i/points)^3
};

/// T[Q](e^{iφ}) = ∫_0^{π/2} dθ (sin 2θ)^{α/2-1} ∫_0^∞ dy y^{-α/2-1} (q(e^{iθ}) - q(e^{iθ} + y e^{iφ}))
/// for q(v) = |v|^{-α/2} Q(arg v). The Ψ-carrying part of the y-integral is taken in
/// ψ = arg(e^{iθ} + y e^{iφ}), which pins the ridge of Q at ψ = π/4.
class DifferenceTransform {
 public:
  DifferenceTransform(double alpha, const QuadratureConfig& q);

  double alpha() const noexcept { return alpha_; }
  cplx apply(double phi, const DiagonalProfile& Q) const;

  /// ∫_0^∞ y^{-α/2-1} (1 - (1 + 2cy + y²)^{-α/4}) dy, c = cos of the angle between e^{iθ} and u.
  double remainder(double c) const;

 private:
  double alpha_;
  double beta_;
  int theta_level_;
  TanhSinhRule theta_rule_, psi_rule_;
  std::vector<double> y_inner_, w_inner_;
  std::vector<double> y_outer_, w_outer_;
  double outer_constant_ = 0.0;  // ∫_{1/2}^∞ y^{-α/2-1} dy

  cplx inner(double theta, double phi, cplx q_theta, const DiagonalProfile& Q) const;
};

/// F_h(g) sampled at the grid angles of g.
HomogeneousFn eval_F(cplx h, const HomogeneousFn& g, const QuadratureConfig& q = {},
                     QuadratureReport* report = nullptr);

/// G_z(f)(u) = c_α F_{-iz}(f)(ǔ), sampled at the grid angles of f.
HomogeneousFn eval_G(cplx z, const HomogeneousFn& f, const QuadratureConfig& q = {},
                     QuadratureReport* report = nullptr);

/// K_α f = -c'_α T[(1.v)^{-α} f(v̌)] for real α, the linearization of G_0 at γ*_0 in the
/// sign convention under which ∂_ε(K_α f) = (H_α f̄)_ε. Sampled at the grid angles of f.
HomogeneousFn apply_K(const HomogeneousFn& f, const QuadratureConfig& q = {});

/// γ*_0(u) = a_0 (1.u)^{α/2}.
HomogeneousFn gamma_zero(double alpha, const std::vector<double>& thetas);

/// a_η with γ*_{iη}(u) = a_η (1.u)^{α/2}: the root of a = Γ(1-α/2) s_{α/2,iη}(a).
double pure_imaginary_amplitude(double eta, double alpha, const LaplaceRule& rule = {});

HomogeneousFn gamma_pure_imaginary(double eta, double alpha, const std::vector<double>& thetas,
                                   const LaplaceRule& rule = {});

struct SolverConfig {
  int grid_size = 129;
  double tolerance = 1e-8;       ///< sup-norm residual ‖f - G_z(f)‖ on the grid
  double damping = 0.5;
  double min_damping = 1.0 / 64.0;
  int max_iterations = 400;
  bool anderson = false;
  int anderson_depth = 3;
  double max_abs_z = 0.5;        ///< guard on |z|
  double min_real_part = 1e-6;   ///< leaving the cone Re f > 0 is an error
  int stagnation_window = 40;    ///< iterations without a new best residual
  QuadratureConfig quadrature;
};

struct FixedPointSolution {
  cplx z;
  double alpha = 1.0;
  HomogeneousFn gamma;
  double residual = 0.0;
  int iterations = 0;
  double damping = 0.5;
  std::vector<double> residual_history;
};

/// Damped iteration f <- f + s (G_z(f) - f), halving s when the residual grows, with
/// optional Anderson mixing. Starts from `initial` or from γ*_{i Im z}.
FixedPointSolution solve_gamma_star(cplx z, double alpha, const SolverConfig& cfg = {},
                                    const HomogeneousFn* initial = nullptr);

/// Solves along `path`, each solve starting from the previous solution.
std::vector<FixedPointSolution> continuation(const std::vector<cplx>& path, double alpha,
                                             const SolverConfig& cfg = {});

/// r_{p,z}(f) = 2^{1-p/2}/Γ(p/2)² ∫ dθ (sin 2θ)^{p/2-1} Ψ_p(h.e^{iθ}, f(e^{iθ})), h = -iz.
cplx r_p(cplx z, const HomogeneousFn& f, double p, const QuadratureConfig& q = {});

/// s_{p,z}(x) = Ψ_p(-iz, x) / Γ(p).
cplx s_p(cplx z, cplx x, double p, double alpha, const LaplaceRule& rule = {});

struct DensityConfig {
  std::vector<double> eta_ladder = {0.1, 0.05, 0.025};
  double max_abs_energy = 20.0;  ///< guard on |E|
  double energy_step = 0.25;     ///< continuation step in E near 0
  double relative_step = 0.5;    ///< continuation steps may grow to this fraction of |E|
  SolverConfig solver = density_solver();

  static SolverConfig density_solver() {
    SolverConfig s;
    s.grid_size = 33;
    s.anderson = true;
    return s;
  }
};

struct DensityPoint {
  double E = 0.0;
  double f_star = 0.0;
  double eta_used = 0.0;            ///< smallest rung
  double extrapolation_error = 0.0;
  std::vector<double> rung_values;  ///< (1/π) Re s_{1,E+iη}(γ*(1)) per rung
};

/// Density of μ★ at the energies `E` (any order), by Stieltjes inversion on the η
/// ladder and order-1 Richardson extrapolation. Solves are continued in E from 0.
std::vector<DensityPoint> spectral_density(const std::vector<double>& energies, double alpha,
                                           const DensityConfig& cfg = {});

struct MassEstimate {
  double mass = 0.0;    ///< window integral plus tail
  double window = 0.0;  ///< ∫_{-W}^{W} f★
  double tail = 0.0;    ///< W^{-α}, from f★(E) ~ (α/2)|E|^{-α-1}
  std::vector<DensityPoint> points;
};

/// Total mass of f★ using symmetry: Gauss–Legendre on [0, 2] and in log E on [2, W].
MassEstimate density_mass(double alpha, const DensityConfig& cfg = {}, double window = 20.0, int nodes = 8);

/// Order-1 Richardson extrapolation to η = 0 from the last two rungs; the error is the
/// difference with the extrapolation from the previous pair.
std::pair<double, double> richardson(const std::vector<double>& etas, const std::vector<double>& values);

}  // namespace levylab
