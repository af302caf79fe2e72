// Command-line front end: decompose | run | extract | sweep.
// Exit codes: 0 success, 2 configuration/validation error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fpheom/bath.hpp"
#include "fpheom/experiment.hpp"
#include "fpheom/gme.hpp"
#include "fpheom/heom.hpp"

namespace fs = std::filesystem;
using namespace fpheom;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << data;
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
}

std::string value_suffix(const std::string& param, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "_%s%g", param == "alpha" ? "a" : param.c_str(), v);
    return buf;
}

void emit(const fs::path& dir, const RunOutputs& out, const std::string& suffix) {
    for (const auto& [name, data] : out.files) write_file(dir / name, data);
    write_file(dir / ("manifest" + suffix + ".json"), out.manifest);
}

int dispatch(const std::string& cmd, const std::string& config_path, const std::string& out_dir,
             const std::string& input_csv, int jobs) {
    ExperimentConfig cfg = parse_config(config_path.empty() ? "" : slurp(config_path));
    const fs::path dir = out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(out_dir);

    if (cmd == "decompose") {
        ModeSet m = decompose_certified(cfg.bath_spec(), cfg.fit, cfg.cert_t_max());
        write_file(dir / "modes.json", modeset_to_json(m));
        std::cout << "certified K=" << m.size() << " residual=" << m.certified_residual << "\n";
        return 0;
    }
    if (cmd == "run") {
        RunOutputs out = run_experiment(cfg);
        emit(dir, out, "");
        std::cout << "wrote " << out.files.size() + 1 << " files to " << dir.string() << "\n";
        return 0;
    }
    if (cmd == "extract") {
        Trajectory tr = trajectory_from_csv(slurp(input_csv));
        MemoryKernelSeries k = extract_kernel(observe_population(tr));
        write_file(dir / "K_extracted.csv", kernel_to_csv(k));
        write_file(dir / "rates.json", rates_to_json(asymptotic_rates(k)));
        std::cout << "wrote kernel and rates to " << dir.string() << "\n";
        return 0;
    }
    if (cmd == "sweep") {
        if (cfg.sweep.param.empty())
            throw ValidationError("sweep requires a 'sweep' section in the configuration");
        std::vector<std::pair<ExperimentConfig, std::string>> points;
        for (double v : cfg.sweep.values) {
            ExperimentConfig p = cfg;
            p.sweep = {};
            if (cfg.sweep.param == "s")
                p.bath.s = v;
            else
                p.bath.alpha = v;
            points.emplace_back(std::move(p), value_suffix(cfg.sweep.param, v));
        }
        std::vector<std::future<RunOutputs>> futs(points.size());
        std::size_t next = 0;
        while (next < points.size()) {
            const std::size_t batch =
                std::min<std::size_t>(static_cast<std::size_t>(jobs), points.size() - next);
            for (std::size_t b = 0; b < batch; ++b)
                futs[next + b] = std::async(std::launch::async, [&points, i = next + b] {
                    return run_experiment(points[i].first, points[i].second);
                });
            for (std::size_t b = 0; b < batch; ++b)
                emit(dir, futs[next + b].get(), points[next + b].second);
            next += batch;
        }
        std::cout << "swept " << points.size() << " points into " << dir.string() << "\n";
        return 0;
    }
    throw ValidationError("unknown command: " + cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-boson dynamics via the free-pole hierarchy: decomposition, propagation, "
                 "and memory-kernel extraction"};
    app.require_subcommand(1);

    std::string config_path, out_dir, input_csv;
    int jobs = 1;

    auto* dec = app.add_subcommand("decompose", "fit and certify the bath mode set");
    dec->add_option("--config", config_path, "JSON configuration file");
    dec->add_option("--out", out_dir, "output directory");

    auto* run = app.add_subcommand("run", "run the configured tasks");
    run->add_option("--config", config_path, "JSON configuration file");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--jobs", jobs, "ignored for plain runs");

    auto* ext = app.add_subcommand("extract", "extract a memory kernel from a trajectory CSV");
    ext->add_option("--input", input_csv, "trajectory CSV (columns t,P,...)")->required();
    ext->add_option("--config", config_path, "JSON configuration file");
    ext->add_option("--out", out_dir, "output directory");

    auto* swp = app.add_subcommand("sweep", "run the configured sweep over s or alpha");
    swp->add_option("--config", config_path, "JSON configuration file");
    swp->add_option("--out", out_dir, "output directory");
    swp->add_option("--jobs", jobs, "concurrent sweep points")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        return dispatch(app.get_subcommands().front()->get_name(), config_path, out_dir,
                        input_csv, jobs);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
