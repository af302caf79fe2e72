#include "fpheom/aaa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <lapacke.h>

#include <nlohmann/json.hpp>

namespace fpheom {

cplx BarycentricApproximant::evaluate(double z) const {
    const std::size_t m = support_points.size();
    cplx den = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        if (z == support_points[k]) return support_values[k];  // interpolatory
        den += weights[k] / cplx(z - support_points[k], 0.0);
    }
    // normalized form: constant data reproduces exactly (c/c = 1)
    cplx r = 0.0;
    for (std::size_t k = 0; k < m; ++k)
        r += (weights[k] / cplx(z - support_points[k], 0.0) / den) * support_values[k];
    return r;
}

BarycentricApproximant aaa_fit(const SampleGrid& grid, const std::vector<double>& values,
                               double rel_tol, int max_degree) {
    const std::size_t n = grid.size();
    if (values.size() != n)
        throw DomainError("aaa_fit: grid/value size mismatch");
    if (n < 3)
        throw DomainError("aaa_fit: need at least 3 samples");
    if (!(rel_tol >= 0.0))
        throw DomainError("aaa_fit: rel_tol must be >= 0");

    const std::vector<double>& Z = grid.points;
    double f_scale = 0.0;
    for (double v : values) f_scale = std::max(f_scale, std::abs(v));

    BarycentricApproximant a;
    std::vector<bool> is_support(n, false);
    std::vector<cplx> r(n, 0.0);
    {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = mean;
    }

    BarycentricApproximant best;
    best.achieved_error = std::numeric_limits<double>::infinity();

    const int max_support = max_degree + 1;
    for (int it = 0; it < max_support; ++it) {
        // promote worst sample; argmax naturally takes the lowest index on ties
        double worst = -1.0;
        std::size_t jw = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_support[i]) continue;
            const double e = std::abs(values[i] - r[i]);
            if (e > worst) { worst = e; jw = i; }
        }
        is_support[jw] = true;
        a.support_points.push_back(Z[jw]);
        a.support_values.push_back(values[jw]);

        const std::size_t m = a.support_points.size();
        std::vector<std::size_t> rest;
        rest.reserve(n - m);
        for (std::size_t i = 0; i < n; ++i)
            if (!is_support[i]) rest.push_back(i);

        // Loewner matrix L_ik = (f_i - f_k)/(z_i - t_k); weights from the
        // right singular vector of the smallest singular value.
        Eigen::MatrixXcd L(rest.size(), m);
        for (std::size_t i = 0; i < rest.size(); ++i)
            for (std::size_t k = 0; k < m; ++k)
                L(i, k) = cplx(values[rest[i]] - a.support_values[k], 0.0) /
                          cplx(Z[rest[i]] - a.support_points[k], 0.0);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L, Eigen::ComputeThinV);
        Eigen::VectorXcd w = svd.matrixV().col(static_cast<Eigen::Index>(m) - 1);
        a.weights.assign(w.data(), w.data() + m);

        // evaluate on the remaining samples
        double err = 0.0;
        for (std::size_t idx : rest) {
            r[idx] = a.evaluate(Z[idx]);
            err = std::max(err, std::abs(values[idx] - r[idx]));
        }
        a.achieved_error = err;
        // keep the best iterate; the greedy max error is then
        // non-increasing in the degree budget
        if (err < best.achieved_error) best = a;
        if (err <= rel_tol * f_scale || err == 0.0) break;
    }
    best.converged = best.achieved_error <= rel_tol * f_scale || best.achieved_error == 0.0;
    return best;
}

namespace {

// Finite generalized eigenvalues of E - lambda B where
//   E = [0 w^T; 1 diag(t)],  B = diag(0, 1, ..., 1).
// Zeros of sum_k c_k/(z - t_k) for c = w (denominator -> poles) or
// c = w.*f (numerator -> zeros of the rational).
std::vector<cplx> pencil_roots(const std::vector<double>& t, const std::vector<cplx>& c) {
    const int m = static_cast<int>(t.size());
    if (m < 2) return {};
    const int n = m + 1;
    std::vector<cplx> E(static_cast<std::size_t>(n) * n, 0.0), B(static_cast<std::size_t>(n) * n, 0.0);
    for (int k = 0; k < m; ++k) {
        E[static_cast<std::size_t>(0) * n + (k + 1)] = c[static_cast<std::size_t>(k)];
        E[static_cast<std::size_t>(k + 1) * n + 0] = 1.0;
        E[static_cast<std::size_t>(k + 1) * n + (k + 1)] = t[static_cast<std::size_t>(k)];
        B[static_cast<std::size_t>(k + 1) * n + (k + 1)] = 1.0;
    }
    std::vector<cplx> alpha(n), beta(n);
    int info = LAPACKE_zggev(LAPACK_ROW_MAJOR, 'N', 'N', n,
                             reinterpret_cast<lapack_complex_double*>(E.data()), n,
                             reinterpret_cast<lapack_complex_double*>(B.data()), n,
                             reinterpret_cast<lapack_complex_double*>(alpha.data()),
                             reinterpret_cast<lapack_complex_double*>(beta.data()),
                             nullptr, n, nullptr, n);
    if (info != 0)
        throw NumericalError("poles_and_residues: zggev failed with info " + std::to_string(info));

    double t_scale = 1.0;
    for (double tv : t) t_scale = std::max(t_scale, std::abs(tv));
    std::vector<cplx> roots;
    for (int i = 0; i < n; ++i) {
        if (std::abs(beta[static_cast<std::size_t>(i)]) < 1e-13) continue;  // infinite eigenvalue
        const cplx p = alpha[static_cast<std::size_t>(i)] / beta[static_cast<std::size_t>(i)];
        if (std::abs(p) > 1e8 * t_scale) continue;
        roots.push_back(p);
    }
    // deterministic order
    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

} // namespace

std::vector<PoleResidue> poles_and_residues(const BarycentricApproximant& a) {
    const std::size_t m = a.support_points.size();
    double wmax = 0.0;
    for (const cplx& w : a.weights) wmax = std::max(wmax, std::abs(w));
    if (m == 0 || wmax == 0.0)
        throw DomainError("poles_and_residues: weights are all zero");
    if (m == 1) return {};  // constant approximant has no poles

    std::vector<cplx> poles = pencil_roots(a.support_points, a.weights);

    // residue = N(p)/D'(p)
    std::vector<PoleResidue> out;
    out.reserve(poles.size());
    for (const cplx& p : poles) {
        cplx num = 0.0, dden = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const cplx dz = p - a.support_points[k];
            num += a.weights[k] * a.support_values[k] / dz;
            dden -= a.weights[k] / (dz * dz);
        }
        out.push_back({p, num / dden});
    }

    // drop numerically negligible residues
    double rmax = 0.0;
    for (const auto& pr : out) rmax = std::max(rmax, std::abs(pr.residue));
    std::erase_if(out, [&](const PoleResidue& pr) { return std::abs(pr.residue) < 1e-13 * rmax; });

    // Froissart doublets: pole nearly cancelled by a zero of the rational
    std::vector<cplx> wf(m);
    for (std::size_t k = 0; k < m; ++k) wf[k] = a.weights[k] * a.support_values[k];
    bool have_zeros = true;
    std::vector<cplx> zeros;
    try {
        zeros = pencil_roots(a.support_points, wf);
    } catch (const NumericalError&) {
        have_zeros = false;
    }
    if (have_zeros) {
        std::erase_if(out, [&](const PoleResidue& pr) {
            for (const cplx& q : zeros)
                if (std::abs(pr.pole - q) < 1e-10) return true;
            return false;
        });
    }
    return out;
}

ModeSet modes_from_poles(const std::vector<PoleResidue>& prs, double fit_tolerance) {
    ModeSet ms;
    ms.fit_tolerance = fit_tolerance;
    for (const auto& pr : prs) {
        if (!(pr.pole.imag() < 0.0)) continue;  // closure below the real axis
        BathMode m;
        m.amplitude = cplx(0.0, -2.0) * pr.residue;
        m.rate = cplx(-pr.pole.imag(), pr.pole.real());
        ms.modes.push_back(m);
    }
    // deterministic order: slow modes last
    std::sort(ms.modes.begin(), ms.modes.end(), [](const BathMode& a, const BathMode& b) {
        if (std::abs(a.rate) != std::abs(b.rate)) return std::abs(a.rate) > std::abs(b.rate);
        return a.rate.imag() > b.rate.imag();
    });
    return ms;
}

cplx reconstruct_correlation(const ModeSet& m, double t) {
    if (t < 0.0)
        throw DomainError("reconstruct_correlation: t must be >= 0");
    cplx acc = 0.0;
    for (const auto& mode : m.modes) acc += mode.amplitude * std::exp(-mode.rate * t);
    return acc;
}

double ModeSet::max_abs_rate() const {
    double r = 0.0;
    for (const auto& m : modes) r = std::max(r, std::abs(m.rate));
    return r;
}

cplx ModeSet::amplitude_sum() const {
    cplx s = 0.0;
    for (const auto& m : modes) s += m.amplitude;
    return s;
}

ModeSet refine_amplitudes(const ModeSet& m, const std::vector<double>& times,
                          const std::vector<cplx>& oracle_values, int lawson_iterations) {
    const std::size_t K = m.size();
    const std::size_t n = times.size();
    if (K == 0 || n < K) return m;
    if (oracle_values.size() != n)
        throw DomainError("refine_amplitudes: grid/value size mismatch");

    double c0_abs = 0.0;
    for (const cplx& v : oracle_values) c0_abs = std::max(c0_abs, std::abs(v));

    Eigen::MatrixXcd E(n, K);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < K; ++k)
            E(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                std::exp(-m.modes[k].rate * times[i]);
    Eigen::VectorXcd b(n);
    for (std::size_t i = 0; i < n; ++i) b(static_cast<Eigen::Index>(i)) = oracle_values[i];

    Eigen::VectorXd wgt = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    ModeSet best = m;
    double best_res = reconstruction_residual(m, times, oracle_values, c0_abs);
    for (int it = 0; it < lawson_iterations; ++it) {
        Eigen::VectorXd sw = wgt.cwiseSqrt();
        Eigen::MatrixXcd Ew = sw.asDiagonal() * E;
        Eigen::VectorXcd bw = sw.asDiagonal() * b;
        Eigen::VectorXcd d = Ew.colPivHouseholderQr().solve(bw);

        ModeSet cand = m;
        for (std::size_t k = 0; k < K; ++k) cand.modes[k].amplitude = d(static_cast<Eigen::Index>(k));
        const double res = reconstruction_residual(cand, times, oracle_values, c0_abs);
        if (res < best_res) { best_res = res; best = cand; }

        Eigen::VectorXd rabs = (E * d - b).cwiseAbs();
        wgt = wgt.cwiseProduct(rabs.array().max(1e-300).matrix());
        wgt /= wgt.sum();
    }
    best.certified_residual = -1.0;  // refit invalidates any prior certificate
    return best;
}

double reconstruction_residual(const ModeSet& m, const std::vector<double>& times,
                               const std::vector<cplx>& oracle_values, double c0_abs) {
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        worst = std::max(worst, std::abs(reconstruct_correlation(m, times[i]) - oracle_values[i]));
    return worst / c0_abs;
}

ModeSet certify(ModeSet m, const std::vector<double>& times,
                const std::vector<cplx>& oracle_values, double c0_abs) {
    if (times.size() != oracle_values.size() || times.empty())
        throw DomainError("certify: bad certification grid");
    double worst = 0.0, worst_t = times.front();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double r = std::abs(reconstruct_correlation(m, times[i]) - oracle_values[i]) / c0_abs;
        if (r > worst) { worst = r; worst_t = times[i]; }
    }
    if (worst > m.fit_tolerance)
        throw CertificationError("mode set failed certification: residual " + std::to_string(worst) +
                                     " at t = " + std::to_string(worst_t) +
                                     " exceeds tolerance " + std::to_string(m.fit_tolerance) +
                                     "; refit with tighter rel_tol or wider sampling",
                                 worst_t, worst);
    m.certified_residual = worst;
    return m;
}

std::string modeset_to_json(const ModeSet& m) {
    nlohmann::json j;
    j["modes"] = nlohmann::json::array();
    for (const auto& mode : m.modes)
        j["modes"].push_back({{"d_re", mode.amplitude.real()},
                              {"d_im", mode.amplitude.imag()},
                              {"z_re", mode.rate.real()},
                              {"z_im", mode.rate.imag()}});
    j["tol"] = m.fit_tolerance;
    j["residual"] = m.certified_residual;
    return j.dump(2);
}

ModeSet modeset_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ModeSet m;
    m.fit_tolerance = j.at("tol").get<double>();
    m.certified_residual = j.at("residual").get<double>();
    for (const auto& e : j.at("modes")) {
        BathMode b;
        b.amplitude = cplx(e.at("d_re").get<double>(), e.at("d_im").get<double>());
        b.rate = cplx(e.at("z_re").get<double>(), e.at("z_im").get<double>());
        if (!(b.rate.real() > 0.0))
            throw ValidationError("modeset_from_json: mode with non-positive decay rate");
        m.modes.push_back(b);
    }
    return m;
}

} // namespace fpheom
