#ifndef FPHEOM_QUADRATURE_HPP
#define FPHEOM_QUADRATURE_HPP

#include <functional>

#include "fpheom/types.hpp"

namespace fpheom {

struct QuadResult {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    int panels = 0;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b]. abs_tol is an absolute target for
// the summed panel error estimate. Throws NumericalError when the panel
// budget runs out before reaching abs_tol.
QuadResult integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                        double abs_tol, int max_panels = 20000);

// Same refinement driven from a pre-seeded panel partition (breakpoints
// must be strictly increasing, length >= 2). One heap spans all seeds.
QuadResult integrate_gk_seeded(const std::function<cplx(double)>& f,
                               const std::vector<double>& breakpoints, double abs_tol,
                               int max_panels = 400000);

// Semi-infinite oscillatory integral  int_0^inf f(w) e^(-i w t) dw  for an
// envelope f decaying at least like exp(-w/omega_scale). The integral is
// split at w = 1/max(|t|, 1/omega_scale); the oscillatory part is handled
// on panels no wider than pi/(4|t|). rel_tol is relative to the result.
QuadResult fourier_semi_infinite(const std::function<double(double)>& f, double t,
                                 double omega_scale, double rel_tol);

} // namespace fpheom

#endif
