#ifndef FPHEOM_CONFIG_HPP
#define FPHEOM_CONFIG_HPP

#include <string>
#include <vector>

#include "fpheom/types.hpp"

namespace fpheom {

// Resolved experiment configuration. Defaults reproduce a small, quick
// variant of the canonical parameter set (eps=0, delta=1, wc=20, T=0,
// alpha=0.1, s=0.5); every field can be set from the JSON document.
struct ExperimentConfig {
    struct System {
        double epsilon = 0.0;
        double delta = 1.0;
    } system;

    struct Bath {
        double alpha = 0.1;
        double s = 0.5;
        double omega_c = 20.0;
        double temperature = 0.0;  // 0 encodes T = 0 (beta = inf)
    } bath;

    struct Fit {
        double tol = 1e-3;
        int max_degree = 60;
        int max_modes = 0;  // 0 = unbounded
        bool refine = true;
        struct Grid {
            double lo_factor = 1e-4;  // in units of omega_c
            double hi_factor = 1e2;
            int points_per_side = 500;
        } grid;
        struct Cert {
            double t_max = 0.0;  // 0 = follow run.t_final
            int points = 400;
        } cert;
    } fit;

    struct Run {
        std::vector<int> tiers = {1, 3};
        double dt = 0.0;  // 0 = auto
        double t_final = 10.0;
        int record_stride = 1;
        std::size_t max_ados = 5000000;
    } run;

    std::vector<std::string> tasks = {"heom"};
    std::string output_dir = "out";

    struct Sweep {
        std::string param;  // "s" or "alpha"; empty = no sweep
        std::vector<double> values;
    } sweep;

    BathSpec bath_spec() const;
    SpinSystem spin_system() const;
    double cert_t_max() const { return fit.cert.t_max > 0.0 ? fit.cert.t_max : run.t_final; }
};

// Parses and validates a JSON configuration document. Unknown keys are
// rejected with the offending key named; constraint violations name the
// key and the constraint.
ExperimentConfig parse_config(const std::string& text);

// The resolved configuration echoed back as JSON (all defaults filled in).
std::string config_to_json(const ExperimentConfig& cfg);

} // namespace fpheom

#endif
