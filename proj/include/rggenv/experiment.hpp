#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rggenv/analysis.hpp"
#include "rggenv/dpp.hpp"
#include "rggenv/envelope.hpp"
#include "rggenv/geometry.hpp"
#include "rggenv/graph.hpp"

namespace rggenv {

inline constexpr int kSchemaVersion = 1;

struct RunRequest {
    std::size_t n = 0;
    std::optional<double> r;      // required in practical mode
    std::optional<double> delta;  // overrides the schedule
    std::optional<double> alpha;  // overrides the schedule
};

struct MonteCarloConfig {
    std::size_t episodes = 20000;
    double step_cap_factor = 50.0;
    std::size_t starts = 10;
    std::uint64_t seed = 0;
};

/// Parsed and validated experiment description (JSON on disk).
struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    int dim = 2;
    DomainSpec domain = DomainSpec::ball({0.5, 0.5}, 0.3);
    EnvelopeCase datum = EnvelopeCase::make_constant(DomainSpec::ball({0.5, 0.5}, 0.3), 0.0);
    ScheduleMode mode = ScheduleMode::practical;
    std::vector<RunRequest> runs;
    std::optional<std::vector<double>> fixture_points;  // explicit cloud, row-major
    std::vector<std::uint64_t> seeds;
    std::optional<double> tol;
    std::size_t max_sweeps = 1'000'000;
    SweepOrder order = SweepOrder::jacobi;
    PerronStart start = PerronStart::boundary_minimum;
    MonteCarloConfig monte_carlo;
    int grid_resolution = 50;
    std::optional<double> grid_margin;
    std::optional<double> direction_spacing;  // default alpha / 2
    std::filesystem::path output_dir = "out";
};

/// Throws Error(config) with a message naming the offending field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// One (parameters, seed) pair of an experiment.
struct RunSpec {
    GraphParams params;
    std::uint64_t seed = 0;
    std::string name() const;  // run_n<n>_seed<seed>
};

/// Runs ordered by (n, seed).
std::vector<RunSpec> expand_runs(const ExperimentConfig& config);

/// Cloud, graph and vertex classification of one run.
struct RunGraph {
    RunSpec spec;
    PointCloud cloud;
    ProximityGraph graph;
    VertexClassification classification;
    bool cache_hit = false;
    std::string warning;  // non-empty when a corrupted cache was rebuilt
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h = 0xcbf29ce484222325ULL);

/// Hash of (schema_version, d, n, seed, r), plus the fixture coordinates if any.
std::uint64_t cache_key(const ExperimentConfig& config, const RunSpec& spec);

/// RGG_ENVELOPE_CACHE if set, otherwise <out>/cache.
std::filesystem::path cache_directory(const std::filesystem::path& out_dir);

std::filesystem::path cache_file(const std::filesystem::path& cache_dir, std::uint64_t key);

/// Serialized cloud + graph: magic, header, coordinates, adjacency, checksum.
std::vector<unsigned char> encode_graph_cache(const RunGraph& run, int schema_version);

/// Decodes into `run` (cloud and graph; not the classification). Returns false
/// on any mismatch: magic, header fields, sizes, or checksum.
bool decode_graph_cache(const std::vector<unsigned char>& bytes, const RunSpec& spec, int dim,
                        int schema_version, RunGraph& run);

/// Loads the cached graph when present and valid, otherwise builds and writes
/// it. The returned object must not be moved (the graph points at the cloud).
std::unique_ptr<RunGraph> load_or_build(const ExperimentConfig& config, const RunSpec& spec,
                                        const std::filesystem::path& cache_dir);

}  // namespace rggenv
