#include "fpheom/config.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

namespace fpheom {

using nlohmann::json;

BathSpec ExperimentConfig::bath_spec() const {
    const double beta = bath.temperature == 0.0 ? kInfiniteBeta : 1.0 / bath.temperature;
    return BathSpec(SpectralParams(bath.alpha, bath.s, bath.omega_c), beta);
}

SpinSystem ExperimentConfig::spin_system() const { return SpinSystem(system.epsilon, system.delta); }

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError("unknown key '" + where + it.key() + "'");
}

double get_num(const json& j, const std::string& key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw ValidationError("key '" + where + key + "' must be a number");
    return j.at(key).get<double>();
}

bool get_bool(const json& j, const std::string& key, bool fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean())
        throw ValidationError("key '" + where + key + "' must be a boolean");
    return j.at(key).get<bool>();
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

const std::set<std::string> kTaskNames = {"heom",  "redfield_plus", "redfield",
                                          "niba",  "extract_kernel", "rates"};

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = text.empty() ? json::object() : json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("configuration is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ValidationError("configuration root must be a JSON object");

    ExperimentConfig c;
    reject_unknown(j, {"system", "bath", "fit", "run", "tasks", "output_dir", "sweep"}, "");

    if (j.contains("system")) {
        const json& s = j["system"];
        reject_unknown(s, {"epsilon", "delta"}, "system.");
        c.system.epsilon = get_num(s, "epsilon", c.system.epsilon, "system.");
        c.system.delta = get_num(s, "delta", c.system.delta, "system.");
        require(c.system.delta >= 0.0, "key 'system.delta' must be >= 0");
    }
    if (j.contains("bath")) {
        const json& b = j["bath"];
        reject_unknown(b, {"alpha", "s", "omega_c", "temperature"}, "bath.");
        c.bath.alpha = get_num(b, "alpha", c.bath.alpha, "bath.");
        c.bath.s = get_num(b, "s", c.bath.s, "bath.");
        c.bath.omega_c = get_num(b, "omega_c", c.bath.omega_c, "bath.");
        c.bath.temperature = get_num(b, "temperature", c.bath.temperature, "bath.");
        require(c.bath.alpha >= 0.0, "key 'bath.alpha' must be >= 0");
        require(c.bath.s >= 0.0 && c.bath.s <= 1.0, "key 'bath.s' must lie in [0, 1]");
        require(c.bath.omega_c > 0.0, "key 'bath.omega_c' must be > 0");
        require(c.bath.temperature >= 0.0, "key 'bath.temperature' must be >= 0");
    }
    if (j.contains("fit")) {
        const json& f = j["fit"];
        reject_unknown(f, {"tol", "max_degree", "max_modes", "refine", "grid", "cert"}, "fit.");
        c.fit.tol = get_num(f, "tol", c.fit.tol, "fit.");
        c.fit.max_degree = static_cast<int>(get_num(f, "max_degree", c.fit.max_degree, "fit."));
        c.fit.max_modes = static_cast<int>(get_num(f, "max_modes", c.fit.max_modes, "fit."));
        c.fit.refine = get_bool(f, "refine", c.fit.refine, "fit.");
        require(c.fit.tol > 0.0, "key 'fit.tol' must be > 0");
        require(c.fit.max_degree >= 2, "key 'fit.max_degree' must be >= 2");
        require(c.fit.max_modes >= 0, "key 'fit.max_modes' must be >= 0");
        if (f.contains("grid")) {
            const json& g = f["grid"];
            reject_unknown(g, {"lo_factor", "hi_factor", "points_per_side"}, "fit.grid.");
            c.fit.grid.lo_factor = get_num(g, "lo_factor", c.fit.grid.lo_factor, "fit.grid.");
            c.fit.grid.hi_factor = get_num(g, "hi_factor", c.fit.grid.hi_factor, "fit.grid.");
            c.fit.grid.points_per_side = static_cast<int>(
                get_num(g, "points_per_side", c.fit.grid.points_per_side, "fit.grid."));
            require(c.fit.grid.lo_factor > 0.0 && c.fit.grid.hi_factor > c.fit.grid.lo_factor,
                    "key 'fit.grid': need 0 < lo_factor < hi_factor");
            require(c.fit.grid.points_per_side >= 16,
                    "key 'fit.grid.points_per_side' must be >= 16");
        }
        if (f.contains("cert")) {
            const json& g = f["cert"];
            reject_unknown(g, {"t_max", "points"}, "fit.cert.");
            c.fit.cert.t_max = get_num(g, "t_max", c.fit.cert.t_max, "fit.cert.");
            c.fit.cert.points = static_cast<int>(get_num(g, "points", c.fit.cert.points, "fit.cert."));
            require(c.fit.cert.t_max >= 0.0, "key 'fit.cert.t_max' must be >= 0");
            require(c.fit.cert.points >= 16, "key 'fit.cert.points' must be >= 16");
        }
    }
    if (j.contains("run")) {
        const json& r = j["run"];
        reject_unknown(r, {"tiers", "dt", "t_final", "record_stride", "max_ados"}, "run.");
        if (r.contains("tiers")) {
            if (!r["tiers"].is_array())
                throw ValidationError("key 'run.tiers' must be an array of integers");
            c.run.tiers.clear();
            for (const auto& e : r["tiers"]) {
                if (!e.is_number_integer())
                    throw ValidationError("key 'run.tiers' must contain integers");
                c.run.tiers.push_back(e.get<int>());
            }
            require(!c.run.tiers.empty(), "key 'run.tiers' must not be empty");
            for (int L : c.run.tiers) require(L >= 0, "key 'run.tiers' entries must be >= 0");
        }
        c.run.dt = get_num(r, "dt", c.run.dt, "run.");
        c.run.t_final = get_num(r, "t_final", c.run.t_final, "run.");
        c.run.record_stride = static_cast<int>(get_num(r, "record_stride", c.run.record_stride, "run."));
        c.run.max_ados = static_cast<std::size_t>(get_num(r, "max_ados",
                                                          static_cast<double>(c.run.max_ados), "run."));
        require(c.run.dt >= 0.0, "key 'run.dt' must be >= 0 (0 = automatic)");
        require(c.run.t_final > 0.0, "key 'run.t_final' must be > 0");
        require(c.run.record_stride >= 1, "key 'run.record_stride' must be >= 1");
    }
    if (j.contains("tasks")) {
        if (!j["tasks"].is_array())
            throw ValidationError("key 'tasks' must be an array");
        c.tasks.clear();
        for (const auto& e : j["tasks"]) {
            if (!e.is_string() || !kTaskNames.count(e.get<std::string>()))
                throw ValidationError("key 'tasks' contains an unknown task '" +
                                      (e.is_string() ? e.get<std::string>() : e.dump()) + "'");
            c.tasks.push_back(e.get<std::string>());
        }
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string())
            throw ValidationError("key 'output_dir' must be a string");
        c.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        reject_unknown(s, {"param", "values"}, "sweep.");
        if (!s.contains("param") || !s.contains("values"))
            throw ValidationError("key 'sweep' needs both 'param' and 'values'");
        c.sweep.param = s["param"].get<std::string>();
        require(c.sweep.param == "s" || c.sweep.param == "alpha",
                "key 'sweep.param' must be 's' or 'alpha'");
        for (const auto& e : s["values"]) {
            if (!e.is_number())
                throw ValidationError("key 'sweep.values' must contain numbers");
            c.sweep.values.push_back(e.get<double>());
        }
        require(!c.sweep.values.empty(), "key 'sweep.values' must not be empty");
    }

    // cross-field checks exercised early so failures name the source key
    (void)c.bath_spec();
    (void)c.spin_system();
    if (std::count(c.tasks.begin(), c.tasks.end(), "extract_kernel") &&
        !std::count(c.tasks.begin(), c.tasks.end(), "heom"))
        throw ValidationError("task 'extract_kernel' requires task 'heom'");
    if (std::count(c.tasks.begin(), c.tasks.end(), "rates") &&
        !std::count(c.tasks.begin(), c.tasks.end(), "extract_kernel"))
        throw ValidationError("task 'rates' requires task 'extract_kernel'");
    return c;
}

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["system"] = {{"epsilon", c.system.epsilon}, {"delta", c.system.delta}};
    j["bath"] = {{"alpha", c.bath.alpha},
                 {"s", c.bath.s},
                 {"omega_c", c.bath.omega_c},
                 {"temperature", c.bath.temperature}};
    j["fit"] = {{"tol", c.fit.tol},
                {"max_degree", c.fit.max_degree},
                {"max_modes", c.fit.max_modes},
                {"refine", c.fit.refine},
                {"grid",
                 {{"lo_factor", c.fit.grid.lo_factor},
                  {"hi_factor", c.fit.grid.hi_factor},
                  {"points_per_side", c.fit.grid.points_per_side}}},
                {"cert", {{"t_max", c.fit.cert.t_max}, {"points", c.fit.cert.points}}}};
    j["run"] = {{"tiers", c.run.tiers},
                {"dt", c.run.dt},
                {"t_final", c.run.t_final},
                {"record_stride", c.run.record_stride},
                {"max_ados", c.run.max_ados}};
    j["tasks"] = c.tasks;
    j["output_dir"] = c.output_dir;
    if (!c.sweep.param.empty())
        j["sweep"] = {{"param", c.sweep.param}, {"values", c.sweep.values}};
    return j.dump(2);
}

} // namespace fpheom
