#ifndef FPHEOM_EXPERIMENT_HPP
#define FPHEOM_EXPERIMENT_HPP

#include <map>
#include <string>

#include "fpheom/aaa.hpp"
#include "fpheom/config.hpp"

namespace fpheom {

// Certified decomposition pipeline: sample the noise power on the fit
// grid, sweep the barycentric degree upward, convert poles to modes
// (optionally re-solving the amplitudes against the oracle), and return
// the first mode set whose reconstruction certifies at fit.tol. Throws
// CertificationError with the best (t, residual) pair when no candidate
// within the mode budget reaches the tolerance.
ModeSet decompose_certified(const BathSpec& bath, const ExperimentConfig::Fit& fit,
                            double cert_t_max);

struct RunOutputs {
    std::map<std::string, std::string> files;  // name -> contents
    std::string manifest;                      // manifest.json contents
};

// Executes decomposition plus each requested task; returns every output
// file keyed by name (the CLI writes them to the output directory).
// suffix decorates file stems for sweep points ("" for plain runs).
RunOutputs run_experiment(const ExperimentConfig& cfg, const std::string& suffix = "");

// FNV-1a 64-bit, hex-encoded; used for manifest artifact checksums.
std::string fnv1a_hex(const std::string& data);

} // namespace fpheom

#endif
