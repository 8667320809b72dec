#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "weylspec/checks.hpp"
#include "weylspec/config.hpp"
#include "weylspec/io.hpp"
#include "weylspec/spectral.hpp"
#include "weylspec/version.hpp"

namespace weylspec {

namespace tasks {

namespace fs = std::filesystem;

struct TaskContext {
    RunConfig cfg;
    Potential pot;
    fs::path out;
    ExecPolicy exec;
    json manifest_extra = json::object();
    std::vector<std::string> files_written;

    void note_file(const fs::path& p) { files_written.push_back(p.filename().string()); }
};

/// Uniform data grid over the support hull of the configured bump.
inline UniformGrid data_grid(const RunConfig& cfg) {
    const double hull = cfg.bump_center + 6.0 * cfg.bump_sigma;
    return UniformGrid::cover(0.0, hull, cfg.grid_dx);
}

inline void run_density(TaskContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    std::vector<double> lambdas = cfg.lambda_grid.points();
    for (double l : lambdas)
        if (!(l > cfg.lambda_min))
            throw ConfigError("density: lambda grid must stay above lambda_min");

    std::vector<ScatteringPoint> pts = parallel_map<ScatteringPoint>(
        lambdas.size(), ctx.exec, [&](size_t i) {
            return c_function(ctx.pot, lambdas[i], cfg.tol, cfg.lambda_min,
                              cfg.x_max_cap);
        });

    if (cfg.write_csv) {
        CsvWriter csv(ctx.out / "sweep.csv", "density_sweep",
                      {"lambda", "a", "b", "re_c", "im_c", "c_abs_sq", "density",
                       "err_bound"});
        for (const ScatteringPoint& p : pts)
            csv.row({p.lambda, p.a, p.b, p.c.real(), p.c.imag(), p.c_abs_sq,
                     p.density, p.truncation_error_bound});
        ctx.note_file(ctx.out / "sweep.csv");
    }
    if (cfg.write_json) {
        json j;
        j["lambda_min"] = cfg.lambda_min;
        j["points"] = pts.size();
        double max_err = 0.0;
        for (const auto& p : pts) max_err = std::max(max_err, p.truncation_error_bound);
        j["max_truncation_error_bound"] = max_err;
        write_json_file(ctx.out / "summary.json", j);
        ctx.note_file(ctx.out / "summary.json");
    }
    ctx.manifest_extra["points"] = pts.size();
}

inline void run_project(TaskContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    UniformGrid grid = data_grid(cfg);
    GridFn g = gaussian_bump(grid, cfg.bump_center, cfg.bump_sigma);

    ProjectionReport weyl =
        weyl_pairing(ctx.pot, cfg.interval_alpha, cfg.interval_beta, g, g,
                     cfg.quad_tol, cfg.lambda_min, ctx.exec, true);
    if (cfg.write_csv) {
        CsvWriter csv(ctx.out / "weyl_nodes.csv", "weyl_nodes",
                      {"k", "lambda", "integrand"});
        for (const auto& [k, vals] : weyl.nodes) csv.row({k, k * k, vals[0]});
        ctx.note_file(ctx.out / "weyl_nodes.csv");
    }

    json summary;
    summary["weyl"] = {{"value", weyl.value},
                       {"quad_error", weyl.quad_error},
                       {"evaluations", weyl.evaluations},
                       {"converged", weyl.converged}};
    json kodaira_entries = json::array();
    for (double eps : cfg.epsilon_schedule) {
        ProjectionReport kod =
            kodaira_pairing(ctx.pot, cfg.interval_alpha, cfg.interval_beta, eps, g, g,
                            std::max(cfg.quad_tol, 1e-7), ctx.exec, cfg.write_csv);
        if (cfg.write_csv) {
            std::ostringstream name;
            name << "kodaira_eps" << eps << ".csv";
            CsvWriter csv(ctx.out / name.str(), "kodaira_nodes",
                          {"lambda", "re_pairing", "im_pairing", "cumulative"});
            double cum = 0.0;
            double prev_l = cfg.interval_alpha;
            for (const auto& [l, vals] : kod.nodes) {
                // vals = {Im<g,Rh>/pi, Re<g,Rh>/pi}; cumulative by trapezoid in l.
                cum += vals[0] * (l - prev_l);
                prev_l = l;
                csv.row({l, vals[1] * pi, vals[0] * pi, cum});
            }
            ctx.note_file(ctx.out / name.str());
        }
        kodaira_entries.push_back({{"epsilon", eps},
                          {"value", kod.value},
                          {"abs_diff_vs_weyl", std::abs(kod.value - weyl.value)},
                          {"evaluations", kod.evaluations},
                          {"converged", kod.converged}});
    }
    summary["kodaira"] = kodaira_entries;
    if (cfg.write_json) {
        write_json_file(ctx.out / "projections.json", summary);
        ctx.note_file(ctx.out / "projections.json");
    }
    ctx.manifest_extra["projections"] = summary;
}

inline void run_bound_states(TaskContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    BoundStateScan scan = find_bound_states(ctx.pot, cfg.z_lo, cfg.z_hi, cfg.n_scan,
                                            cfg.tol, cfg.grid_dx, ctx.exec,
                                            cfg.x_max_cap);
    if (cfg.write_csv) {
        CsvWriter csv(ctx.out / "scan.csv", "jost_scan", {"z", "m"});
        for (size_t i = 0; i < scan.scan_z.size(); ++i)
            csv.row({scan.scan_z[i], scan.scan_m[i]});
        ctx.note_file(ctx.out / "scan.csv");
        for (size_t i = 0; i < scan.states.size(); ++i) {
            std::ostringstream name;
            name << "eigenfunction_" << i << ".csv";
            CsvWriter csv2(ctx.out / name.str(), "eigenfunction", {"x", "f"});
            const BoundState& s = scan.states[i];
            for (int m = 0; m < s.f.grid.n; ++m) csv2.row({s.f.grid.x(m), s.f.v[m]});
            ctx.note_file(ctx.out / name.str());
        }
    }
    json j;
    j["states"] = json::array();
    for (const BoundState& s : scan.states)
        j["states"].push_back({{"eigenvalue", s.lambda},
                               {"z", s.z},
                               {"residual", s.residual_m},
                               {"norm_check", s.norm_check},
                               {"decay_rate_fit", s.decay_rate_fit}});
    j["warnings"] = scan.warnings;
    if (cfg.write_json) {
        write_json_file(ctx.out / "bound_states.json", j);
        ctx.note_file(ctx.out / "bound_states.json");
    }
    ctx.manifest_extra["bound_states"] = j;

    ZeroEnergyReport z = zero_energy_report(ctx.pot, cfg.zero_energy_x_max, cfg.tol);
    json zj{{"slope", z.slope},
            {"intercept", z.intercept},
            {"fit_residual", z.fit_residual},
            {"not_square_integrable", z.not_square_integrable},
            {"resonance_indicator", z.resonance_indicator}};
    if (cfg.write_json) {
        write_json_file(ctx.out / "zero_energy.json", zj);
        ctx.note_file(ctx.out / "zero_energy.json");
    }
}

inline void run_reconstruct(TaskContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    UniformGrid grid = data_grid(cfg);
    GridFn h = gaussian_bump(grid, cfg.bump_center, cfg.bump_sigma);

    auto [z_lo, z_hi] = default_z_window(ctx.pot);
    std::vector<BoundState> bound;
    if (z_hi > z_lo)
        bound = find_bound_states(ctx.pot, z_lo, z_hi, 128, cfg.tol, cfg.grid_dx,
                                  ctx.exec, cfg.x_max_cap)
                    .states;

    ReconstructReport rec = reconstruct(ctx.pot, h, cfg.lambda_max, cfg.recon_tol,
                                        cfg.lambda_min, &bound, ctx.exec);
    ParsevalReport par = parseval_check(ctx.pot, h, cfg.lambda_max, cfg.recon_tol,
                                        cfg.lambda_min, &bound, ctx.exec);

    if (cfg.write_csv) {
        CsvWriter csv(ctx.out / "reconstruction.csv", "reconstruction",
                      {"x", "h", "reconstructed", "deviation"});
        for (int i = 0; i < grid.n; ++i)
            csv.row({grid.x(i), h.v[i], rec.reconstruction.v[i],
                     rec.reconstruction.v[i] - h.v[i]});
        ctx.note_file(ctx.out / "reconstruction.csv");
    }
    json j;
    j["sup_deviation"] = rec.sup_deviation;
    j["tail_estimate"] = rec.tail_estimate;
    j["bound_share"] = rec.bound_share;
    j["bound_states_used"] = bound.size();
    j["parseval"] = {{"norm_sq", par.norm_sq},
                     {"bound_sum", par.bound_sum},
                     {"continuous_integral", par.continuous_integral},
                     {"relative_defect", par.defect_rel}};
    if (cfg.write_json) {
        write_json_file(ctx.out / "reconstruct.json", j);
        ctx.note_file(ctx.out / "reconstruct.json");
    }
    ctx.manifest_extra["reconstruct"] = j;
}

inline void run_green(TaskContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    UniformGrid grid = data_grid(cfg);
    GridFn h = gaussian_bump(grid, cfg.bump_center, cfg.bump_sigma);
    const cplx nu = cfg.nu;

    GridFnC rh = apply_resolvent(ctx.pot, nu, h, cfg.tol);
    GridFnC drh = apply_operator_fd(ctx.pot, rh);
    double defect = 0.0;
    for (int i = 2; i + 2 < grid.n; ++i)
        defect = std::max(defect, std::abs(drh.v[i] - nu * rh.v[i] - cplx(h.v[i])));

    if (cfg.write_csv) {
        CsvWriter csv(ctx.out / "resolvent.csv", "resolvent",
                      {"x", "h", "re_resolvent", "im_resolvent"});
        for (int i = 0; i < grid.n; ++i)
            csv.row({grid.x(i), h.v[i], rh.v[i].real(), rh.v[i].imag()});
        ctx.note_file(ctx.out / "resolvent.csv");

        CsvWriter kcsv(ctx.out / "kernel.csv", "green_kernel",
                       {"x", "y", "re_k", "im_k"});
        const int nk = 12;
        for (int i = 0; i <= nk; ++i)
            for (int j = 0; j <= nk; ++j) {
                const double x = grid.back() * i / nk, y = grid.back() * j / nk;
                GreenKernelSample s = green_kernel(ctx.pot, nu, x, y, cfg.tol);
                kcsv.row({x, y, s.value.real(), s.value.imag()});
            }
        ctx.note_file(ctx.out / "kernel.csv");
    }
    GreenKernelSample sample = green_kernel(ctx.pot, nu, 1.0, 2.0, cfg.tol);
    json j;
    j["nu"] = {nu.real(), nu.imag()};
    j["wronskian"] = {sample.wronskian_w.real(), sample.wronskian_w.imag()};
    j["resolvent_defect_sup"] = defect;
    if (cfg.write_json) {
        write_json_file(ctx.out / "green.json", j);
        ctx.note_file(ctx.out / "green.json");
    }
    ctx.manifest_extra["green"] = j;
}

inline bool run_verify(TaskContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    std::vector<CheckResult> results =
        run_verify_suite(ctx.pot, cfg.tol, cfg.quad_tol, cfg.seed, ctx.exec);

    // Time-average identity over the configured horizons and window. The data
    // bump sits at x = 8 so its forward translates stay clear of the origin.
    {
        UniformGrid grid = UniformGrid::cover(0.0, 12.2, cfg.grid_dx);
        GridFn g = gaussian_bump(grid, 8.0, 0.7);
        auto phi = bump_window(cfg.phi_lo, cfg.phi_hi);
        TimeAverageReport rep =
            time_average_check(ctx.pot, phi, cfg.phi_lo, cfg.phi_hi, g, g,
                               cfg.t_grid, cfg.quad_tol, cfg.lambda_min, ctx.exec);
        CheckResult r;
        r.name = "spectral.time_average_identity[" + ctx.pot.name() + "]";
        r.measured = rep.defect.back();
        r.threshold = 1e-3;
        r.pass = rep.defect.back() <= 1e-3 &&
                 (rep.non_increasing || rep.defect.front() <= 1e-3);
        std::ostringstream d;
        d << "lhs=" << rep.lhs << " defects:";
        for (double v : rep.defect) d << " " << v;
        r.detail = d.str();
        results.push_back(r);
    }

    json j = json::array();
    bool all_pass = true;
    for (const CheckResult& r : results) {
        j.push_back({{"name", r.name},
                     {"pass", r.pass},
                     {"measured", r.measured},
                     {"threshold", r.threshold},
                     {"detail", r.detail}});
        all_pass = all_pass && r.pass;
    }
    if (cfg.write_json) {
        write_json_file(ctx.out / "verify.json", j);
        ctx.note_file(ctx.out / "verify.json");
    }
    ctx.manifest_extra["verify"] = j;
    ctx.manifest_extra["verify_all_pass"] = all_pass;
    return all_pass;
}

/// Execute a validated config. Returns the process exit status:
/// 0 success, 1 numerical failure (diagnostic.json written when possible).
inline int run(const RunConfig& cfg, bool quiet = false) {
    const auto t0 = std::chrono::steady_clock::now();
    TaskContext ctx{cfg, cfg.make_potential(), fs::path(cfg.out_dir),
                    ExecPolicy{cfg.threads}, json::object(), {}};
    fs::create_directories(ctx.out);

    bool ok = true;
    try {
        switch (cfg.task) {
            case Task::density:
            case Task::cfunction: run_density(ctx); break;
            case Task::project: run_project(ctx); break;
            case Task::bound_states: run_bound_states(ctx); break;
            case Task::reconstruct: run_reconstruct(ctx); break;
            case Task::green: run_green(ctx); break;
            case Task::verify: ok = run_verify(ctx); break;
        }
    } catch (const ConfigError&) {
        throw; // caller maps to exit 2
    } catch (const Error& e) {
        json diag{{"error", e.what()}, {"task", to_string(cfg.task)}};
        write_json_file(ctx.out / "diagnostic.json", diag);
        if (!quiet) std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 1;
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest;
    manifest["version"] = version_string;
    manifest["task"] = to_string(cfg.task);
    manifest["seed"] = cfg.seed;
    manifest["wall_time_seconds"] = wall;
    manifest["files"] = ctx.files_written;
    manifest["potential"] =
        cfg.tabulated
            ? json{{"tabulated", true}, {"knots", cfg.tab_x.size()}}
            : json{{"name", cfg.potential_name}, {"params", cfg.potential_params}};
    manifest["numeric"] = {{"tol", cfg.tol},
                           {"quad_tol", cfg.quad_tol},
                           {"lambda_min", cfg.lambda_min},
                           {"lambda_max", cfg.lambda_max},
                           {"grid_dx", cfg.grid_dx}};
    for (auto it = ctx.manifest_extra.begin(); it != ctx.manifest_extra.end(); ++it)
        manifest[it.key()] = it.value();
    write_json_file(ctx.out / "manifest.json", manifest);
    if (!quiet)
        std::fprintf(stdout, "task %s: %s (%.2fs), outputs in %s\n",
                     to_string(cfg.task), ok ? "ok" : "FAILED", wall,
                     ctx.out.string().c_str());
    return ok ? 0 : 1;
}

} // namespace tasks

} // namespace weylspec
