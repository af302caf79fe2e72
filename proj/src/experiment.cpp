#include "fpheom/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <nlohmann/json.hpp>

#include "fpheom/bath.hpp"
#include "fpheom/gme.hpp"
#include "fpheom/heom.hpp"
#include "fpheom/niba.hpp"
#include "fpheom/perturbative.hpp"

namespace fpheom {

using nlohmann::json;

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ModeSet decompose_certified(const BathSpec& bath, const ExperimentConfig::Fit& fit,
                            double cert_t_max) {
    if (bath.spectral.alpha == 0.0) {
        ModeSet empty;
        empty.fit_tolerance = fit.tol;
        empty.certified_residual = 0.0;  // reconstruction and oracle are both zero
        return empty;
    }

    const SampleGrid grid = default_fit_grid(bath.spectral, fit.grid.lo_factor,
                                             fit.grid.hi_factor,
                                             static_cast<std::size_t>(fit.grid.points_per_side));
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = noise_power(grid.points[i], bath);

    const SampleGrid cert = default_certification_grid(bath.spectral.omega_c, cert_t_max,
                                                       static_cast<std::size_t>(fit.cert.points));
    std::vector<cplx> oracle(cert.size());
    for (std::size_t i = 0; i < cert.size(); ++i)
        oracle[i] = correlation_oracle(cert.points[i], bath);
    const double c0_abs = std::abs(correlation_oracle(0.0, bath));

    ModeSet best;
    double best_res = std::numeric_limits<double>::infinity();
    double worst_t = cert.points.front();
    const int budget = fit.max_modes > 0 ? fit.max_modes : std::numeric_limits<int>::max();

    for (int m = 2; m <= fit.max_degree; ++m) {
        BarycentricApproximant a = aaa_fit(grid, values, 0.0, m);
        std::vector<PoleResidue> prs;
        try {
            prs = poles_and_residues(a);
        } catch (const NumericalError&) {
            continue;  // degenerate pencil at this degree; try the next
        }
        ModeSet cand = modes_from_poles(prs, fit.tol);
        if (cand.size() == 0) continue;
        if (static_cast<int>(cand.size()) > budget) {
            if (best_res < std::numeric_limits<double>::infinity()) break;
            continue;
        }
        if (fit.refine)
            cand = refine_amplitudes(cand, cert.points, oracle);
        const double res = reconstruction_residual(cand, cert.points, oracle, c0_abs);
        if (res < best_res) {
            best_res = res;
            best = cand;
            for (std::size_t i = 0; i < cert.size(); ++i) {
                const double r =
                    std::abs(reconstruct_correlation(cand, cert.points[i]) - oracle[i]) / c0_abs;
                if (r == res) worst_t = cert.points[i];
            }
        }
        if (best_res <= fit.tol) break;
        if (a.achieved_error == 0.0) break;  // exact fit reached, nothing further to add
    }

    if (!(best_res <= fit.tol))
        throw CertificationError(
            "decomposition failed certification: best residual " + std::to_string(best_res) +
                " exceeds tolerance " + std::to_string(fit.tol) +
                " within the mode budget; widen the window or raise max_modes",
            worst_t, best_res);
    return certify(best, cert.points, oracle, c0_abs);
}

RunOutputs run_experiment(const ExperimentConfig& cfg, const std::string& suffix) {
    const auto t_start = std::chrono::steady_clock::now();
    RunOutputs out;

    const SpinSystem sys = cfg.spin_system();
    const BathSpec bath = cfg.bath_spec();

    ModeSet modes = decompose_certified(bath, cfg.fit, cfg.cert_t_max());
    out.files["modes" + suffix + ".json"] = modeset_to_json(modes);

    PropagatorConfig pcfg =
        cfg.run.dt > 0.0
            ? PropagatorConfig(cfg.run.dt, cfg.run.t_final, cfg.run.record_stride,
                               modes.max_abs_rate())
            : PropagatorConfig::auto_config(sys, modes, cfg.run.t_final, cfg.run.record_stride);

    const Mat2 initial = 0.5 * (identity2() + sigma_z());  // spin-up start, P(0) = 1

    auto has_task = [&](const char* name) {
        return std::find(cfg.tasks.begin(), cfg.tasks.end(), name) != cfg.tasks.end();
    };

    Trajectory top_heom;  // highest tier, reused by extract_kernel
    if (has_task("heom")) {
        for (int L : cfg.run.tiers) {
            Trajectory tr = propagate(initial, sys, modes, pcfg, L, cfg.run.max_ados);
            out.files["P_heom_L" + std::to_string(L) + suffix + ".csv"] = trajectory_to_csv(tr);
            if (L == *std::max_element(cfg.run.tiers.begin(), cfg.run.tiers.end()))
                top_heom = std::move(tr);
        }
    }
    if (has_task("redfield_plus"))
        out.files["P_redfield_plus" + suffix + ".csv"] =
            trajectory_to_csv(redfield_plus_propagate(initial, sys, modes, pcfg));
    if (has_task("redfield"))
        out.files["P_redfield" + suffix + ".csv"] =
            trajectory_to_csv(redfield_propagate(initial, sys, modes, pcfg));

    const double kernel_h = pcfg.dt * cfg.run.record_stride;
    if (has_task("niba")) {
        MemoryKernelSeries kn;
        kn.h = kernel_h;
        kn.values = niba_kernel_series(kernel_h, cfg.run.t_final, sys, bath);
        out.files["K_niba" + suffix + ".csv"] = kernel_to_csv(kn, "K_niba");
    }
    if (has_task("extract_kernel")) {
        MemoryKernelSeries kx = extract_kernel(observe_population(top_heom));
        out.files["K_exact" + suffix + ".csv"] = kernel_to_csv(kx);
        if (has_task("rates"))
            out.files["rates" + suffix + ".json"] = rates_to_json(asymptotic_rates(kx));
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    json manifest;
    manifest["config"] = json::parse(config_to_json(cfg));
    manifest["mode_set"] = {{"K", modes.size()},
                            {"certified_residual", modes.certified_residual},
                            {"fit_tolerance", modes.fit_tolerance}};
    manifest["solver"] = {{"dt", pcfg.dt},
                          {"t_final", pcfg.t_final},
                          {"record_stride", pcfg.record_stride},
                          {"max_abs_rate", modes.max_abs_rate()}};
    manifest["wall_clock_seconds"] = wall;
    json sums = json::object();
    for (const auto& [name, data] : out.files) sums[name] = fnv1a_hex(data);
    manifest["checksums"] = sums;
    out.manifest = manifest.dump(2);
    return out;
}

} // namespace fpheom
