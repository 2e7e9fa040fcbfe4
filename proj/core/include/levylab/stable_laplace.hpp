#pragma once

#include <complex>

namespace levylab {

using cplx = std::complex<double>;

/// Quadrature controls for Ψ_p(a,b) = ∫_0^∞ r^{p-1} exp(-a r - b r^{α/2}) dr.
struct LaplaceRule {
  int gauss_nodes = 12;       ///< Gauss–Legendre nodes per panel
  int geometric_levels = 8;   ///< panels [T 2^{-k-1}, T 2^{-k}] toward the origin
  double cutoff = 36.0;       ///< truncate where the real exponent reaches -cutoff
  double max_phase = 8.0;     ///< largest phase change allowed on one panel
};

/// Ψ_p(a,b) for Re a >= 0, Re b >= 0, not both zero.
///
/// The ray of integration is rotated to r = ρ e^{iφ} with φ = -arg a (clamped so the
/// b-term keeps decaying), then t = ρ^{α/2} turns the integral into
/// (2/α) ∫ t^{2p/α-1} exp(-A t^{2/α} - B t) dt on [0,T], with T fixed by the cutoff.
/// Ψ_p(s a, s^{α/2} b) = s^{-p} Ψ_p(a, b), and the rule respects this covariance.
cplx laplace_stable(double p, cplx a, cplx b, double alpha, const LaplaceRule& rule = {});

/// min((2/α) Γ(2p/α) Re(b)^{-2p/α}, Γ(p) Re(a)^{-p}), a bound on ∫|integrand|.
double laplace_stable_bound(double p, cplx a, cplx b, double alpha);

}  // namespace levylab
