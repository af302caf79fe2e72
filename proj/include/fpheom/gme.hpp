#ifndef FPHEOM_GME_HPP
#define FPHEOM_GME_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fpheom/heom.hpp"
#include "fpheom/types.hpp"

namespace fpheom {

// Scalar memory kernel K(t) on a uniform grid (or the 2x2 matrix kernel
// K_{ss'} in the general interface).
struct MemoryKernelSeries {
    double h = 0.0;
    std::vector<double> values;  // scalar kernel

    double t_final() const { return h * static_cast<double>(values.size() - 1); }
};

struct MatrixKernelSeries {
    double h = 0.0;
    // entries [pp, pm, mp, mm] per grid point
    std::vector<std::array<double, 4>> values;
};

struct RateMatrix {
    double k = 0.0;               // integral of the scalar kernel
    std::array<double, 4> k_matrix{};  // matrix interface (pp, pm, mp, mm)
    double horizon = 0.0;
    double tail_exponent = 0.0;
    bool converged = false;
    bool nonintegrable = false;
};

// Forward-solves Pdot(t) = -int_0^t K(t-u) P(u) du on the kernel grid by
// implicit-trapezoid stepping with trapezoidal memory, sharpened by one
// Richardson pass (h and h/2). P(0) = p0.
PopulationSeries gme_forward(const MemoryKernelSeries& kernel, double p0, double t_final);

// Single-pass variant without Richardson; exposes the raw discretization
// shared with extract_kernel.
PopulationSeries gme_forward_plain(const MemoryKernelSeries& kernel, double p0, double t_final,
                                   std::vector<double>* memory_sums = nullptr);

// Matrix GME for the populations (P_+, P_-).
std::vector<std::array<double, 2>> gme_forward_matrix(const MatrixKernelSeries& kernel,
                                                      std::array<double, 2> p0, double t_final);

// Volterra inversion of the scalar GME: trapezoid weights, 4th-order finite
// differences for Pdot, sequential triangular solve. K(0) comes from the
// leading equations closed by cubic extrapolation, not from an i=0 limit.
MemoryKernelSeries extract_kernel(const PopulationSeries& p);

// Matrix extraction from two trajectories with initial conditions
// (P_+, P_-) = (1,0) and (0,1).
MatrixKernelSeries extract_kernel_matrix(const std::vector<std::array<double, 2>>& traj_up,
                                         const std::vector<std::array<double, 2>>& traj_down,
                                         double h);

// k = int_0^inf K: trapezoid over the sampled horizon plus an algebraic
// tail estimate from a power-law fit over the final decade. Non-decaying
// kernels are flagged nonintegrable and report no rate.
RateMatrix asymptotic_rates(const MemoryKernelSeries& kernel);

std::string kernel_to_csv(const MemoryKernelSeries& k, const std::string& value_name = "K");
std::string matrix_kernel_to_csv(const MatrixKernelSeries& k);
std::string rates_to_json(const RateMatrix& r);

} // namespace fpheom

#endif
