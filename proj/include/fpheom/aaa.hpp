#ifndef FPHEOM_AAA_HPP
#define FPHEOM_AAA_HPP

#include <utility>
#include <vector>

#include "fpheom/types.hpp"

namespace fpheom {

// Rational interpolant in barycentric form,
//   r(z) = sum_k w_k f_k/(z - t_k) / sum_k w_k/(z - t_k).
// Interpolates f_k at every support point t_k exactly.
struct BarycentricApproximant {
    std::vector<double> support_points;
    std::vector<double> support_values;
    std::vector<cplx> weights;
    double achieved_error = 0.0;  // max |f - r| over the sample set
    bool converged = false;       // reached rel_tol before max_degree

    cplx evaluate(double z) const;
    std::size_t degree() const { return support_points.empty() ? 0 : support_points.size() - 1; }
};

// Greedy rational fit (AAA scheme): each iteration promotes the
// worst-error sample to a support point (ties broken toward the lower
// index) and re-solves the weights from the SVD of the Loewner matrix.
// Stops when max error <= rel_tol * max|f| or degree() == max_degree.
BarycentricApproximant aaa_fit(const SampleGrid& grid, const std::vector<double>& values,
                               double rel_tol, int max_degree = 60);

struct PoleResidue {
    cplx pole;
    cplx residue;
};

// Finite generalized eigenvalues of the barycentric companion pencil;
// residues by local linearization r(z) ~ res/(z - pole). Spurious poles
// (residue below 1e-13 of the largest, or pole-zero doublets closer than
// 1e-10) are discarded.
std::vector<PoleResidue> poles_and_residues(const BarycentricApproximant& a);

// One decaying exponential of the correlation series: d * exp(-z t),
// z = gamma + i*omega with gamma > 0.
struct BathMode {
    cplx amplitude;  // d_k
    cplx rate;       // z_k
};

struct ModeSet {
    std::vector<BathMode> modes;
    double fit_tolerance = 1e-3;
    double certified_residual = -1.0;  // < 0 means not certified yet

    std::size_t size() const { return modes.size(); }
    bool certified() const { return certified_residual >= 0.0; }
    double max_abs_rate() const;
    cplx amplitude_sum() const;
};

// Contour closure of the Fourier integral for t >= 0: keep poles in the
// lower half-plane only; pole w_p = omega - i*gamma with residue r maps to
// d = -2i r, z = gamma + i*omega.
ModeSet modes_from_poles(const std::vector<PoleResidue>& prs, double fit_tolerance);

// sum_k d_k exp(-z_k t)
cplx reconstruct_correlation(const ModeSet& m, double t);

// Re-solves the amplitudes only (rates fixed) against oracle samples of
// C(t) on a grid, by Lawson-weighted least squares biased toward the
// worst-error points. Improves the reconstruction residual per mode.
ModeSet refine_amplitudes(const ModeSet& m, const std::vector<double>& times,
                          const std::vector<cplx>& oracle_values, int lawson_iterations = 25);

// Residual of the reconstruction against precomputed oracle values,
// max_t |recon - oracle| / |C(0)|.
double reconstruction_residual(const ModeSet& m, const std::vector<double>& times,
                               const std::vector<cplx>& oracle_values, double c0_abs);

// Stamps certified_residual; throws CertificationError (with the worst
// (t, residual) pair) when the residual exceeds fit_tolerance.
ModeSet certify(ModeSet m, const std::vector<double>& times,
                const std::vector<cplx>& oracle_values, double c0_abs);

std::string modeset_to_json(const ModeSet& m);
ModeSet modeset_from_json(const std::string& text);

} // namespace fpheom

#endif
