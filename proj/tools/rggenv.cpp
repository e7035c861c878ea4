#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "rggenv/commands.hpp"
#include "rggenv/errors.hpp"

int main(int argc, char** argv) {
    using namespace rggenv;
    CLI::App app{"Convex envelopes on random geometric graphs"};
    app.require_subcommand(1);

    using Command = int (*)(const CommandOptions&, std::ostream&);
    const std::map<std::string, std::pair<Command, std::string>> commands = {
        {"build", {cmd_build, "Sample clouds and build graphs into the cache"}},
        {"solve", {cmd_solve, "Solve the dynamic programming equation per run"}},
        {"simulate", {cmd_simulate, "Monte Carlo of the greedy game against the solved values"}},
        {"study", {cmd_study, "Convergence table against the analytic envelope"}},
        {"coverage", {cmd_coverage, "Directional coverage of the annulus neighborhoods"}},
    };

    CommandOptions options;
    std::string out;
    std::vector<std::uint64_t> seeds;
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.second);
        sub->add_option("--config", options.config_path, "Experiment config (JSON)")->required();
        sub->add_option("--out", out, "Output directory (overrides output_dir)");
        sub->add_option("--seeds", seeds, "Seeds (override the config)")->delimiter(',');
        sub->add_option("--jobs", options.jobs, "Runs processed concurrently")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_config;
    }
    if (!out.empty()) options.out = out;
    if (!seeds.empty()) options.seeds = seeds;

    for (const auto& [name, entry] : commands) {
        if (!app.got_subcommand(name)) continue;
        try {
            return entry.first(options, std::cout);
        } catch (const std::exception& e) {
            std::cerr << "rggenv " << name << ": " << e.what() << '\n';
            return exit_code_for(e);
        }
    }
    return exit_other;
}
