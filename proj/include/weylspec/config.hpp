#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylspec/common.hpp"
#include "weylspec/potential.hpp"

namespace weylspec {

using json = nlohmann::json;

enum class Task {
    density,
    cfunction,
    project,
    bound_states,
    reconstruct,
    green,
    verify,
};

inline Task task_from_string(const std::string& s) {
    if (s == "density") return Task::density;
    if (s == "cfunction") return Task::cfunction;
    if (s == "project") return Task::project;
    if (s == "bound_states") return Task::bound_states;
    if (s == "reconstruct") return Task::reconstruct;
    if (s == "green") return Task::green;
    if (s == "verify") return Task::verify;
    throw ConfigError("unknown task '" + s + "'");
}

inline const char* to_string(Task t) {
    switch (t) {
        case Task::density: return "density";
        case Task::cfunction: return "cfunction";
        case Task::project: return "project";
        case Task::bound_states: return "bound_states";
        case Task::reconstruct: return "reconstruct";
        case Task::green: return "green";
        case Task::verify: return "verify";
    }
    return "?";
}

/// Structured spacing of a scan grid.
struct GridSpec {
    double lo = 0.5;
    double hi = 10.0;
    int count = 64;
    bool geometric = false;

    std::vector<double> points() const {
        std::vector<double> xs(count);
        for (int i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.0 : double(i) / (count - 1);
            xs[i] = geometric ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
        }
        return xs;
    }
};

/// Validated run configuration (strict: unknown keys are rejected).
struct RunConfig {
    int version = 1;
    Task task = Task::density;

    // potential
    bool tabulated = false;
    std::string potential_name = "free";
    std::vector<double> potential_params;
    std::vector<double> tab_x, tab_p, tab_q;

    // numeric
    double tol = 1e-10;
    double quad_tol = 1e-8;
    double recon_tol = 1e-3;
    double lambda_min = 1e-3;
    double lambda_max = 60.0;
    GridSpec lambda_grid{0.5, 10.0, 64, false};
    double interval_alpha = 1.0;
    double interval_beta = 4.0;
    std::vector<double> epsilon_schedule{1e-1, 1e-2, 1e-3};
    double z_lo = 0.01;
    double z_hi = 1.0;
    int n_scan = 128;
    double grid_dx = 0.01;
    double x_max_cap = 1e4;
    std::vector<double> t_grid{10.0, 30.0, 100.0};
    double bump_center = 5.0;
    double bump_sigma = 0.7;
    double phi_lo = 1.0;
    double phi_hi = 4.0;
    cplx nu{-1.0, 0.5};
    double zero_energy_x_max = 40.0;

    // output
    std::string out_dir = "out";
    bool write_csv = true;
    bool write_json = true;

    unsigned seed = 1;
    unsigned threads = 0; ///< 0 = hardware concurrency

    Potential make_potential() const {
        if (tabulated) return tabulated_potential(tab_x, tab_p, tab_q);
        return make_builtin_potential(potential_name, potential_params);
    }
};

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& known,
                           const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

inline double positive(const json& j, const std::string& name) {
    if (!j.is_number()) throw ConfigError(name + " must be a number");
    const double v = j.get<double>();
    if (!(v > 0.0)) throw ConfigError(name + " must be > 0");
    return v;
}

inline std::vector<double> number_list(const json& j, const std::string& name) {
    if (!j.is_array()) throw ConfigError(name + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : j) {
        if (!e.is_number()) throw ConfigError(name + " must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

inline std::vector<double> strictly_increasing(const json& j, const std::string& name) {
    std::vector<double> v = number_list(j, name);
    for (size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1]))
            throw ConfigError(name + " must be strictly increasing");
    return v;
}

} // namespace detail

/// Parse and validate a config document. Throws ConfigError on any problem.
inline RunConfig parse_config(const json& root) {
    if (!root.is_object()) throw ConfigError("config root must be an object");
    detail::reject_unknown(root, {"version", "task", "potential", "numeric", "output", "seed", "threads"},
                           "config root");
    RunConfig cfg;

    if (root.contains("version")) {
        if (!root["version"].is_number_integer())
            throw ConfigError("version must be an integer");
        cfg.version = root["version"].get<int>();
        if (cfg.version != 1) throw ConfigError("unsupported config version");
    }
    if (!root.contains("task") || !root["task"].is_string())
        throw ConfigError("config requires a string 'task'");
    cfg.task = task_from_string(root["task"].get<std::string>());

    if (!root.contains("potential") || !root["potential"].is_object())
        throw ConfigError("config requires an object 'potential'");
    {
        const json& p = root["potential"];
        detail::reject_unknown(p, {"name", "params", "tabulated"}, "potential");
        if (p.contains("tabulated")) {
            if (p.contains("name") || p.contains("params"))
                throw ConfigError("potential: 'tabulated' excludes 'name'/'params'");
            const json& t = p["tabulated"];
            detail::reject_unknown(t, {"x", "p", "q"}, "potential.tabulated");
            if (!t.contains("x") || !t.contains("p") || !t.contains("q"))
                throw ConfigError("potential.tabulated requires x, p, q arrays");
            cfg.tabulated = true;
            cfg.tab_x = detail::strictly_increasing(t["x"], "potential.tabulated.x");
            cfg.tab_p = detail::number_list(t["p"], "potential.tabulated.p");
            cfg.tab_q = detail::number_list(t["q"], "potential.tabulated.q");
            if (cfg.tab_x.size() != cfg.tab_p.size() || cfg.tab_x.size() != cfg.tab_q.size())
                throw ConfigError("potential.tabulated arrays must have equal length");
            if (cfg.tab_x.size() < 4)
                throw ConfigError("potential.tabulated needs at least 4 knots");
        } else {
            if (!p.contains("name") || !p["name"].is_string())
                throw ConfigError("potential requires a string 'name'");
            cfg.potential_name = p["name"].get<std::string>();
            if (p.contains("params"))
                cfg.potential_params = detail::number_list(p["params"], "potential.params");
        }
    }

    if (root.contains("numeric")) {
        const json& n = root["numeric"];
        detail::reject_unknown(
            n,
            {"tol", "quad_tol", "recon_tol", "lambda_min", "lambda_max", "lambda_grid", "interval",
             "epsilon_schedule", "z_range", "n_scan", "grid_dx", "x_max_cap", "t_grid",
             "bump", "phi_window", "nu", "zero_energy_x_max"},
            "numeric");
        if (n.contains("tol")) cfg.tol = detail::positive(n["tol"], "numeric.tol");
        if (n.contains("quad_tol"))
            cfg.quad_tol = detail::positive(n["quad_tol"], "numeric.quad_tol");
        if (n.contains("recon_tol"))
            cfg.recon_tol = detail::positive(n["recon_tol"], "numeric.recon_tol");
        if (n.contains("lambda_min"))
            cfg.lambda_min = detail::positive(n["lambda_min"], "numeric.lambda_min");
        if (n.contains("lambda_max"))
            cfg.lambda_max = detail::positive(n["lambda_max"], "numeric.lambda_max");
        if (n.contains("lambda_grid")) {
            const json& g = n["lambda_grid"];
            detail::reject_unknown(g, {"lo", "hi", "count", "scale"}, "numeric.lambda_grid");
            if (g.contains("lo")) cfg.lambda_grid.lo = detail::positive(g["lo"], "lambda_grid.lo");
            if (g.contains("hi")) cfg.lambda_grid.hi = detail::positive(g["hi"], "lambda_grid.hi");
            if (g.contains("count")) {
                if (!g["count"].is_number_integer() || g["count"].get<int>() < 2)
                    throw ConfigError("lambda_grid.count must be an integer >= 2");
                cfg.lambda_grid.count = g["count"].get<int>();
            }
            if (g.contains("scale")) {
                const std::string s = g["scale"].get<std::string>();
                if (s != "linear" && s != "geometric")
                    throw ConfigError("lambda_grid.scale must be 'linear' or 'geometric'");
                cfg.lambda_grid.geometric = s == "geometric";
            }
            if (!(cfg.lambda_grid.lo < cfg.lambda_grid.hi))
                throw ConfigError("lambda_grid: need lo < hi");
        }
        if (n.contains("interval")) {
            std::vector<double> iv = detail::strictly_increasing(n["interval"], "numeric.interval");
            if (iv.size() != 2) throw ConfigError("numeric.interval must be [alpha, beta]");
            cfg.interval_alpha = iv[0];
            cfg.interval_beta = iv[1];
        }
        if (n.contains("epsilon_schedule")) {
            cfg.epsilon_schedule = detail::number_list(n["epsilon_schedule"], "numeric.epsilon_schedule");
            if (cfg.epsilon_schedule.empty())
                throw ConfigError("numeric.epsilon_schedule must be nonempty");
            for (double e : cfg.epsilon_schedule)
                if (!(e > 0.0)) throw ConfigError("epsilon_schedule entries must be > 0");
        }
        if (n.contains("z_range")) {
            std::vector<double> z = detail::strictly_increasing(n["z_range"], "numeric.z_range");
            if (z.size() != 2 || !(z[0] > 0.0))
                throw ConfigError("numeric.z_range must be [z_lo, z_hi] with z_lo > 0");
            cfg.z_lo = z[0];
            cfg.z_hi = z[1];
        }
        if (n.contains("n_scan")) {
            if (!n["n_scan"].is_number_integer() || n["n_scan"].get<int>() < 16)
                throw ConfigError("numeric.n_scan must be an integer >= 16");
            cfg.n_scan = n["n_scan"].get<int>();
        }
        if (n.contains("grid_dx")) cfg.grid_dx = detail::positive(n["grid_dx"], "numeric.grid_dx");
        if (n.contains("x_max_cap"))
            cfg.x_max_cap = detail::positive(n["x_max_cap"], "numeric.x_max_cap");
        if (n.contains("t_grid")) {
            cfg.t_grid = detail::strictly_increasing(n["t_grid"], "numeric.t_grid");
            if (cfg.t_grid.empty() || !(cfg.t_grid.front() > 0.0))
                throw ConfigError("numeric.t_grid must be positive and increasing");
        }
        if (n.contains("bump")) {
            const json& b = n["bump"];
            detail::reject_unknown(b, {"center", "sigma"}, "numeric.bump");
            if (b.contains("center")) cfg.bump_center = detail::positive(b["center"], "bump.center");
            if (b.contains("sigma")) cfg.bump_sigma = detail::positive(b["sigma"], "bump.sigma");
        }
        if (n.contains("phi_window")) {
            std::vector<double> w = detail::strictly_increasing(n["phi_window"], "numeric.phi_window");
            if (w.size() != 2) throw ConfigError("numeric.phi_window must be [lo, hi]");
            cfg.phi_lo = w[0];
            cfg.phi_hi = w[1];
        }
        if (n.contains("nu")) {
            std::vector<double> v = detail::number_list(n["nu"], "numeric.nu");
            if (v.size() != 2) throw ConfigError("numeric.nu must be [re, im]");
            cfg.nu = cplx(v[0], v[1]);
            if (cfg.nu.imag() == 0.0 && cfg.nu.real() >= 0.0)
                throw ConfigError("numeric.nu must avoid the nonnegative real axis");
        }
        if (n.contains("zero_energy_x_max"))
            cfg.zero_energy_x_max =
                detail::positive(n["zero_energy_x_max"], "numeric.zero_energy_x_max");
    }
    if (!(cfg.lambda_min < cfg.lambda_max))
        throw ConfigError("need lambda_min < lambda_max");
    if (!(cfg.lambda_min < cfg.interval_alpha && cfg.interval_alpha < cfg.interval_beta))
        throw ConfigError("need lambda_min < alpha < beta in numeric.interval");

    if (root.contains("output")) {
        const json& o = root["output"];
        detail::reject_unknown(o, {"dir", "formats", "precision"}, "output");
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) throw ConfigError("output.dir must be a string");
            cfg.out_dir = o["dir"].get<std::string>();
        }
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) throw ConfigError("output.formats must be an array");
            cfg.write_csv = cfg.write_json = false;
            for (const auto& f : o["formats"]) {
                const std::string s = f.get<std::string>();
                if (s == "csv") cfg.write_csv = true;
                else if (s == "json") cfg.write_json = true;
                else throw ConfigError("output.formats entries must be 'csv' or 'json'");
            }
        }
        if (o.contains("precision")) {
            if (!o["precision"].is_number_integer() || o["precision"].get<int>() != 17)
                throw ConfigError("output.precision: only 17 significant digits supported");
        }
    }
    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer() || root["seed"].get<long long>() < 0)
            throw ConfigError("seed must be a nonnegative integer");
        cfg.seed = root["seed"].get<unsigned>();
    }
    if (root.contains("threads")) {
        if (!root["threads"].is_number_integer() || root["threads"].get<long long>() < 0)
            throw ConfigError("threads must be a nonnegative integer");
        cfg.threads = root["threads"].get<unsigned>();
    }
    return cfg;
}

inline RunConfig parse_config_string(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config is not valid JSON");
    return parse_config(j);
}

} // namespace weylspec
