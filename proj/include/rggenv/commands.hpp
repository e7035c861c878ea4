#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rggenv/experiment.hpp"

namespace rggenv {

enum ExitCode : int {
    exit_ok = 0,
    exit_other = 1,
    exit_config = 2,
    exit_non_convergence = 3,
    exit_mc_disagreement = 4,
    exit_coverage = 5,
};

struct CommandOptions {
    std::filesystem::path config_path;
    std::optional<std::filesystem::path> out;  // overrides output_dir
    std::optional<std::vector<std::uint64_t>> seeds;
    unsigned jobs = 1;
};

/// Config with the command-line overrides applied.
ExperimentConfig resolve_config(const CommandOptions& options);

int cmd_build(const CommandOptions& options, std::ostream& log);
int cmd_solve(const CommandOptions& options, std::ostream& log);
int cmd_simulate(const CommandOptions& options, std::ostream& log);
int cmd_study(const CommandOptions& options, std::ostream& log);
int cmd_coverage(const CommandOptions& options, std::ostream& log);

/// Maps a library error to the process exit code.
int exit_code_for(const std::exception& e);

/// 17 significant digits, as written to every CSV.
std::string format_double(double v);

/// Seed of the Monte Carlo stream started at x0 within a run.
std::uint64_t mc_stream_seed(std::uint64_t mc_seed, std::uint64_t run_seed, Index x0);

/// Starting vertices interior[i * size / starts], i < starts.
std::vector<Index> mc_starts(const VertexClassification& classification, std::size_t starts);

}  // namespace rggenv
