#ifndef FPHEOM_TYPES_HPP
#define FPHEOM_TYPES_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "fpheom/errors.hpp"

namespace fpheom {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

inline Mat2 sigma_x() { Mat2 m; m << 0, 1, 1, 0; return m; }
inline Mat2 sigma_y() { Mat2 m; m << 0, cplx(0, -1), cplx(0, 1), 0; return m; }
inline Mat2 sigma_z() { Mat2 m; m << 1, 0, 0, -1; return m; }
inline Mat2 identity2() { return Mat2::Identity(); }

// Two-level system H_s = eps*sigma_z + delta*sigma_x; the bath couples
// through q = sigma_z (fixed throughout).
struct SpinSystem {
    double epsilon = 0.0;
    double delta = 1.0;

    SpinSystem() = default;
    SpinSystem(double eps, double del) : epsilon(eps), delta(del) {
        if (!std::isfinite(eps) || !std::isfinite(del))
            throw DomainError("SpinSystem: epsilon and delta must be finite");
        if (del < 0.0)
            throw DomainError("SpinSystem: delta must be >= 0");
    }

    Mat2 hamiltonian() const { return epsilon * sigma_z() + delta * sigma_x(); }
    Mat2 coupling_operator() const { return sigma_z(); }
    double level_spacing() const { return 2.0 * std::sqrt(epsilon * epsilon + delta * delta); }
};

// J(w) = (pi/2) * alpha * wc^(1-s) * w^s * exp(-w/wc)
struct SpectralParams {
    double alpha = 0.1;
    double s = 0.5;
    double omega_c = 20.0;

    SpectralParams() = default;
    SpectralParams(double alpha, double s, double omega_c)
        : alpha(alpha), s(s), omega_c(omega_c) {
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw DomainError("SpectralParams: alpha must be >= 0");
        if (!(s >= 0.0 && s <= 1.0))
            throw DomainError("SpectralParams: s must lie in [0, 1]");
        if (!(omega_c > 0.0) || !std::isfinite(omega_c))
            throw DomainError("SpectralParams: omega_c must be > 0");
    }
};

// Spectral parameters plus inverse temperature. beta = inf encodes T = 0
// exactly; a large finite beta is never used as a stand-in.
struct BathSpec {
    SpectralParams spectral;
    double inverse_temperature = kInfiniteBeta;

    BathSpec() = default;
    BathSpec(SpectralParams p, double beta) : spectral(p), inverse_temperature(beta) {
        if (!(beta > 0.0))  // admits +inf
            throw DomainError("BathSpec: inverse temperature must be > 0 or infinite");
    }

    bool zero_temperature() const { return std::isinf(inverse_temperature); }
};

enum class SpacingKind { Uniform, Logarithmic, Composite };

// Strictly increasing list of sample abscissae (frequencies or times).
struct SampleGrid {
    std::vector<double> points;
    SpacingKind spacing_kind = SpacingKind::Composite;

    SampleGrid() = default;
    SampleGrid(std::vector<double> pts, SpacingKind kind)
        : points(std::move(pts)), spacing_kind(kind) {
        validate();
    }

    void validate() const {
        if (points.empty())
            throw DomainError("SampleGrid: empty grid");
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!std::isfinite(points[i]))
                throw DomainError("SampleGrid: non-finite point");
            if (i > 0 && !(points[i] > points[i - 1]))
                throw DomainError("SampleGrid: points must be strictly increasing");
        }
    }

    std::size_t size() const { return points.size(); }

    static SampleGrid uniform(double a, double b, std::size_t n);
    static SampleGrid logarithmic(double a, double b, std::size_t n);
    // Union of pieces, sorted, duplicates merged.
    static SampleGrid composite(const std::vector<std::vector<double>>& pieces);
};

} // namespace fpheom

#endif
