#ifndef FPHEOM_BATH_HPP
#define FPHEOM_BATH_HPP

#include "fpheom/types.hpp"

namespace fpheom {

// J(w) = (pi/2) alpha wc^(1-s) w^s exp(-w/wc), defined for w >= 0.
double spectral_density(double omega, const SpectralParams& p);

// Quantum noise power S_beta(w), the Fourier transform of the bath
// autocorrelation. For w > 0: S = 2[n_beta(w)+1] J(w); detailed balance
// fixes the negative axis, S(-w) = exp(-beta w) S(w). At T = 0 the
// negative axis vanishes identically.
double noise_power(double omega, const BathSpec& b);

// C(t) = (1/pi) int_-inf^inf S_beta(w) exp(-i w t) dw by adaptive
// oscillation-aware quadrature. Ground truth for mode certification.
cplx correlation_oracle(double t, const BathSpec& b, double quad_tol = 1e-10);

// Default frequency grid for rational fitting of S_beta: log-spaced points
// between lo_factor*wc and hi_factor*wc mirrored about zero, plus w = 0.
SampleGrid default_fit_grid(const SpectralParams& p, double lo_factor = 1e-4,
                            double hi_factor = 1e2, std::size_t points_per_side = 500);

// Log-spaced time grid on [t_min, t_max] used to certify reconstructions.
SampleGrid default_certification_grid(double omega_c, double t_max, std::size_t points = 400);

} // namespace fpheom

#endif
