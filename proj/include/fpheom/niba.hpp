#ifndef FPHEOM_NIBA_HPP
#define FPHEOM_NIBA_HPP

#include <utility>
#include <vector>

#include "fpheom/types.hpp"

namespace fpheom {

// Twice-integrated bath correlation entering the blip kernel,
//   Q(t) = (8/pi) int_0^inf dw J(w)/w^2 [coth(bw/2)(1 - cos wt) + i sin wt],
// returned as (Q', Q''). coth -> 1 at T = 0. The prefactor is fixed by the
// sigma_z coupling (blip charge 2) together with the correlation
// normalization C(t) = (1/pi) int S_beta e^{-iwt}.
std::pair<double, double> pair_interaction(double t, const BathSpec& b, double quad_tol = 1e-10);

// K_NIBA(t) = 4 Delta^2 exp(-Q'(t)) cos(Q''(t)), unbiased case only.
double niba_kernel(double t, const SpinSystem& sys, const BathSpec& b, double quad_tol = 1e-10);

struct PairInteraction {
    std::vector<double> times;
    std::vector<double> q_real;
    std::vector<double> q_imag;
};

PairInteraction pair_interaction_series(const std::vector<double>& times, const BathSpec& b,
                                        double quad_tol = 1e-10);

// Kernel on a uniform grid [0, t_final], spacing h.
std::vector<double> niba_kernel_series(double h, double t_final, const SpinSystem& sys,
                                       const BathSpec& b, double quad_tol = 1e-10);

} // namespace fpheom

#endif
