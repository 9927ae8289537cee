#include <string>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "tcgate/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Pulse-level simulator for coupler-mediated controlled-phase gates"};
    app.require_subcommand(1);
    app.fallthrough();

    tcg::RunOptions opts;
    std::string config, out;
    int threads = 0;
    bool verbose = false;
    app.add_option("--config", config, "INI config file (built-in defaults when omitted)");
    app.add_option("--out", out, "output directory (overrides output.directory)");
    app.add_option("--threads", threads, "worker threads for scan cells")->check(CLI::PositiveNumber);
    app.add_flag("--seedless", opts.seedless, "assert that the run uses no random numbers");
    app.add_flag("-v,--verbose", verbose, "debug logging");
    for (const auto& name : tcg::subcommands()) app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : tcg::kExitConfig;
    }
    if (verbose) spdlog::set_level(spdlog::level::debug);
    if (!config.empty()) opts.config_path = config;
    if (!out.empty()) opts.out_dir = out;
    if (threads > 0) opts.threads = threads;
    return tcg::run(app.get_subcommands().front()->get_name(), opts);
}
