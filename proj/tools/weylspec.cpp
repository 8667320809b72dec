// Command-line driver: loads a JSON run config, executes the requested task,
// and writes CSV/JSON artifacts plus a manifest into the output directory.
//
// Exit codes: 0 success, 1 numerical failure, 2 config validation failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "weylspec/config.hpp"
#include "weylspec/tasks.hpp"
#include "weylspec/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"weylspec: numerical spectral analysis of half-line "
                 "Sturm-Liouville operators"};
    app.set_version_flag("--version", weylspec::version_string);

    std::string config_path;
    std::string task_override;
    std::string out_override;
    long long seed_override = -1;
    long long threads_override = -1;
    bool quiet = false;

    app.add_option("--config", config_path, "path to the JSON run config")
        ->required();
    app.add_option("--task", task_override,
                   "override the task (density|cfunction|project|bound_states|"
                   "reconstruct|green|verify)");
    app.add_option("--out", out_override, "override the output directory");
    app.add_option("--seed", seed_override, "override the RNG seed");
    app.add_option("--threads", threads_override,
                   "worker threads (0 = hardware concurrency; falls back to "
                   "WEYLSPEC_THREADS)");
    app.add_flag("--quiet", quiet, "suppress progress output");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(config_path);
        if (!in) {
            std::fprintf(stderr, "config error: cannot open %s\n", config_path.c_str());
            return 2;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        weylspec::RunConfig cfg = weylspec::parse_config_string(buf.str());

        if (!task_override.empty()) cfg.task = weylspec::task_from_string(task_override);
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (seed_override >= 0) cfg.seed = static_cast<unsigned>(seed_override);
        if (threads_override >= 0) {
            cfg.threads = static_cast<unsigned>(threads_override);
        } else if (const char* env = std::getenv("WEYLSPEC_THREADS")) {
            cfg.threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
        }

        return weylspec::tasks::run(cfg, quiet);
    } catch (const weylspec::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
