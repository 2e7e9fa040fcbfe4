#pragma once

#include <complex>

namespace levylab {

using cplx = std::complex<double>;

/// Γ(z) for complex z (Lanczos, g = 7, n = 9), with reflection for Re z < 1/2.
cplx complex_gamma(cplx z);

/// log Γ(z) on the principal branch of the Lanczos representation.
cplx complex_lgamma(cplx z);

/// c_α = α / (2^{α/2} Γ(α/2)^2).
double c_alpha(double alpha);
cplx c_alpha(cplx alpha);

/// a_0 = (Γ(1-α/2) / Γ(1+α/2))^{1/2}, the z = 0 amplitude of the order parameter.
double a0_alpha(double alpha);
cplx a0_alpha(cplx alpha);

/// c'_α = c_α · 2 / (α a_0²).
cplx c_prime_alpha(cplx alpha);

}  // namespace levylab
