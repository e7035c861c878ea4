#include "rggenv/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rggenv/errors.hpp"
#include "rggenv/game.hpp"
#include "rggenv/random.hpp"

namespace rggenv {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
    std::vector<std::exception_ptr> failures(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
}

fs::path prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::io, "cannot create output directory " + dir.string());
    return dir;
}

struct Context {
    ExperimentConfig config;
    std::vector<RunSpec> runs;
    fs::path out;
    fs::path cache;
    unsigned jobs = 1;
};

Context make_context(const CommandOptions& options) {
    Context ctx;
    ctx.config = resolve_config(options);
    ctx.runs = expand_runs(ctx.config);
    ctx.out = prepare_dir(ctx.config.output_dir);
    ctx.cache = cache_directory(ctx.out);
    ctx.jobs = std::max(1u, options.jobs);
    return ctx;
}

struct SolvedRun {
    std::unique_ptr<RunGraph> graph;
    AnnulusTable table;
    ValueField field;
};

SolvedRun solve_run(const Context& ctx, const RunSpec& spec, std::ostringstream& log) {
    SolvedRun s;
    s.graph = load_or_build(ctx.config, spec, ctx.cache);
    if (!s.graph->warning.empty()) log << "warning: " << s.graph->warning << '\n';
    const auto& cls = s.graph->classification;
    if (cls.component_vertices.size() != s.graph->cloud.size())
        log << spec.name() << ": largest component has " << cls.component_vertices.size() << " of "
            << s.graph->cloud.size() << " vertices; values and extensions use the component only\n";
    s.table = AnnulusTable(s.graph->graph, cls, spec.params.delta);
    SolverOptions opts;
    opts.tol = ctx.config.tol;
    opts.max_sweeps = ctx.config.max_sweeps;
    opts.order = ctx.config.order;
    opts.start = ctx.config.start;
    s.field = solve_dpp(s.table, cls, ctx.config.datum.datum(), opts);
    return s;
}

ordered_json params_json(const RunSpec& spec) {
    ordered_json j;
    j["n"] = spec.params.n;
    j["r"] = spec.params.r;
    j["delta"] = spec.params.delta;
    j["alpha"] = spec.params.alpha;
    j["seed"] = spec.seed;
    return j;
}

double max_reflection_error_over_r(const AnnulusTable& table, const VertexClassification& cls) {
    double m = 0.0;
    for (Index x : cls.interior) m = std::max(m, table.max_reflection_error(x));
    return m / table.graph().radius();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

void flush_logs(std::ostream& log, const std::vector<std::ostringstream>& logs) {
    for (const auto& l : logs) log << l.str();
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t mc_stream_seed(std::uint64_t mc_seed, std::uint64_t run_seed, Index x0) {
    return derive_key(derive_key(mc_seed, run_seed), x0);
}

std::vector<Index> mc_starts(const VertexClassification& classification, std::size_t starts) {
    const auto& interior = classification.interior;
    std::vector<Index> out;
    const std::size_t count = std::min(starts, interior.size());
    for (std::size_t i = 0; i < count; ++i) out.push_back(interior[i * interior.size() / count]);
    return out;
}

ExperimentConfig resolve_config(const CommandOptions& options) {
    ExperimentConfig c = load_config(options.config_path);
    if (options.out) c.output_dir = *options.out;
    if (options.seeds) {
        if (options.seeds->empty()) throw Error(ErrorKind::config, "config: --seeds must name at least one seed");
        c.seeds = *options.seeds;
    }
    return c;
}

int exit_code_for(const std::exception& e) {
    const auto* err = dynamic_cast<const Error*>(&e);
    if (!err) return exit_other;
    switch (err->kind()) {
        case ErrorKind::config:
        case ErrorKind::invalid_dimension:
        case ErrorKind::invalid_parameter:
        case ErrorKind::schedule_undefined:
            return exit_config;
        case ErrorKind::non_convergence:
            return exit_non_convergence;
        case ErrorKind::non_termination:
            return exit_mc_disagreement;
        case ErrorKind::missing_annulus:
            return exit_coverage;
        default:
            return exit_other;
    }
}

int cmd_build(const CommandOptions& options, std::ostream& log) {
    const Context ctx = make_context(options);
    prepare_dir(ctx.cache);
    std::vector<std::ostringstream> logs(ctx.runs.size());
    std::vector<std::string> rows(ctx.runs.size());
    parallel_for(ctx.runs.size(), ctx.jobs, [&](std::size_t i) {
        const RunSpec& spec = ctx.runs[i];
        const auto run = load_or_build(ctx.config, spec, ctx.cache);
        if (!run->warning.empty()) logs[i] << "warning: " << run->warning << '\n';
        const auto file = cache_file(ctx.cache, cache_key(ctx.config, spec));
        logs[i] << spec.name() << ": " << (run->cache_hit ? "cache hit " : "built ") << file.string() << '\n';
        std::ostringstream row;
        row << spec.params.n << ',' << format_double(spec.params.r) << ',' << spec.seed << ','
            << run->graph.edge_count() << ',' << run->classification.component_vertices.size() << ','
            << run->classification.interior.size() << ',' << run->classification.boundary.size() << ','
            << file.filename().string() << '\n';
        rows[i] = row.str();
    });
    flush_logs(log, logs);
    std::string csv = "n,r,seed,edges,component_size,interior,boundary,cache_file\n";
    for (const auto& r : rows) csv += r;
    write_text(ctx.out / "graphs.csv", csv);
    return exit_ok;
}

int cmd_solve(const CommandOptions& options, std::ostream& log) {
    const Context ctx = make_context(options);
    std::vector<std::ostringstream> logs(ctx.runs.size());
    parallel_for(ctx.runs.size(), ctx.jobs, [&](std::size_t i) {
        const RunSpec& spec = ctx.runs[i];
        const SolvedRun s = solve_run(ctx, spec, logs[i]);
        const auto& cls = s.graph->classification;
        const int d = ctx.config.dim;
        const fs::path dir = prepare_dir(ctx.out / spec.name());

        std::string csv = "vertex_index";
        for (int k = 1; k <= d; ++k) csv += ",x_" + std::to_string(k);
        csv += ",region,value\n";
        for (Index v : cls.component_vertices) {
            csv += std::to_string(v);
            for (double c : s.graph->cloud.point(v)) csv += ',' + format_double(c);
            csv += cls.is_interior(v) ? ",interior," : ",boundary,";
            csv += format_double(s.field.values[v]) + '\n';
        }
        write_text(dir / "values.csv", csv);

        ordered_json summary = params_json(spec);
        summary["dimension"] = d;
        summary["datum"] = ctx.config.datum.id();
        summary["sweeps"] = s.field.sweeps;
        summary["residual"] = s.field.residual;
        summary["cloud_size"] = s.graph->cloud.size();
        summary["component_size"] = cls.component_vertices.size();
        summary["interior"] = cls.interior.size();
        summary["boundary"] = cls.boundary.size();
        write_text(dir / "summary.json", summary.dump(2) + '\n');
        logs[i] << spec.name() << ": " << s.field.sweeps << " sweeps, residual "
                << format_double(s.field.residual) << '\n';
    });
    flush_logs(log, logs);
    return exit_ok;
}

int cmd_simulate(const CommandOptions& options, std::ostream& log) {
    const Context ctx = make_context(options);
    const auto& mc = ctx.config.monte_carlo;
    std::vector<std::ostringstream> logs(ctx.runs.size());
    std::vector<std::size_t> disagreements(ctx.runs.size(), 0);
    parallel_for(ctx.runs.size(), ctx.jobs, [&](std::size_t i) {
        const RunSpec& spec = ctx.runs[i];
        const SolvedRun s = solve_run(ctx, spec, logs[i]);
        const auto& cls = s.graph->classification;
        const auto datum = ctx.config.datum.datum();
        const std::size_t cap = default_step_cap(ctx.config.dim, spec.params.r, mc.step_cap_factor);

        std::string csv = "x0_index,u_dpp,mc_mean,mc_stderr,N,tau_mean,tau_max\n";
        for (Index x0 : mc_starts(cls, mc.starts)) {
            const auto est = monte_carlo_value(s.table, cls, datum, s.field.values, x0, mc.episodes,
                                               mc_stream_seed(mc.seed, spec.seed, x0), cap);
            const double u = s.field.values[x0];
            if (std::abs(est.mean - u) > 3.0 * est.std_error) {
                ++disagreements[i];
                logs[i] << spec.name() << ": start " << x0 << " mc_mean " << format_double(est.mean)
                        << " differs from u_dpp " << format_double(u) << " by more than 3 stderr ("
                        << format_double(est.std_error) << ")\n";
            }
            csv += std::to_string(x0) + ',' + format_double(u) + ',' + format_double(est.mean) + ',' +
                   format_double(est.std_error) + ',' + std::to_string(est.episodes) + ',' +
                   format_double(est.tau_mean) + ',' + std::to_string(est.tau_max) + '\n';
        }
        write_text(prepare_dir(ctx.out / spec.name()) / "mc.csv", csv);
    });
    flush_logs(log, logs);
    for (auto n : disagreements)
        if (n > 0) return exit_mc_disagreement;
    return exit_ok;
}

int cmd_study(const CommandOptions& options, std::ostream& log) {
    const Context ctx = make_context(options);
    std::vector<std::ostringstream> logs(ctx.runs.size());
    std::vector<ConvergenceRecord> records(ctx.runs.size());
    parallel_for(ctx.runs.size(), ctx.jobs, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        const RunSpec& spec = ctx.runs[i];
        const SolvedRun s = solve_run(ctx, spec, logs[i]);
        const auto& cls = s.graph->classification;
        const NearestVertexIndex index(s.graph->cloud, cls.component_vertices);
        const EvalGrid grid{ctx.config.grid_resolution, ctx.config.grid_margin};
        const auto err = sup_error(s.field.values, index, ctx.config.datum, grid, spec.params.r);

        ConvergenceRecord& rec = records[i];
        rec.n = spec.params.n;
        rec.r = spec.params.r;
        rec.delta = spec.params.delta;
        rec.alpha = spec.params.alpha;
        rec.seed = spec.seed;
        rec.sup_error = err.sup;
        rec.mean_error = err.mean;
        rec.sweeps = s.field.sweeps;
        rec.max_reflection_error = max_reflection_error_over_r(s.table, cls);
        rec.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        logs[i] << spec.name() << ": sup error " << format_double(rec.sup_error) << ", " << rec.sweeps
                << " sweeps\n";
    });
    flush_logs(log, logs);

    std::string csv = "n,r,delta,alpha,seed,sup_error,mean_error,sweeps,max_reflection_error\n";
    ordered_json timing = ordered_json::array();
    for (const auto& rec : records) {
        csv += std::to_string(rec.n) + ',' + format_double(rec.r) + ',' + format_double(rec.delta) + ',' +
               format_double(rec.alpha) + ',' + std::to_string(rec.seed) + ',' + format_double(rec.sup_error) +
               ',' + format_double(rec.mean_error) + ',' + std::to_string(rec.sweeps) + ',' +
               format_double(rec.max_reflection_error) + '\n';
        timing.push_back({{"n", rec.n}, {"seed", rec.seed}, {"runtime_seconds", rec.runtime_seconds}});
    }
    write_text(ctx.out / "convergence.csv", csv);
    write_text(ctx.out / "timing.json", timing.dump(2) + '\n');

    std::string plot = "n,median_sup_error\n";
    for (std::size_t i = 0; i < records.size();) {
        std::size_t j = i;
        std::vector<double> errs;
        while (j < records.size() && records[j].n == records[i].n) errs.push_back(records[j++].sup_error);
        plot += std::to_string(records[i].n) + ',' + format_double(median(errs)) + '\n';
        i = j;
    }
    write_text(ctx.out / "plotdata.csv", plot);
    return exit_ok;
}

int cmd_coverage(const CommandOptions& options, std::ostream& log) {
    const Context ctx = make_context(options);
    std::vector<std::ostringstream> logs(ctx.runs.size());
    std::vector<std::string> rows(ctx.runs.size());
    std::vector<std::size_t> below(ctx.runs.size(), 0);
    parallel_for(ctx.runs.size(), ctx.jobs, [&](std::size_t i) {
        const RunSpec& spec = ctx.runs[i];
        const auto run = load_or_build(ctx.config, spec, ctx.cache);
        if (!run->warning.empty()) logs[i] << "warning: " << run->warning << '\n';
        const AnnulusTable table(run->graph, run->classification, spec.params.delta);
        const double spacing = ctx.config.direction_spacing.value_or(0.5 * spec.params.alpha);
        const auto rep = coverage_report(run->graph, run->classification, table, spec.params, spacing);
        below[i] = rep.vertices_below_n0;
        if (rep.vertices_below_n0 > 0)
            logs[i] << spec.name() << ": " << rep.vertices_below_n0
                    << " interior vertices have an empty annulus (first: " << table.empty_vertices().front()
                    << "); the run is below the empirical n0\n";
        rows[i] = std::to_string(spec.params.n) + ',' + format_double(spec.params.r) + ',' +
                  format_double(spec.params.delta) + ',' + format_double(spec.params.alpha) + ',' +
                  std::to_string(spec.seed) + ',' + std::to_string(rep.sectors_tested) + ',' +
                  std::to_string(rep.sectors_empty) + ',' + format_double(rep.max_reflection_error) + ',' +
                  format_double(rep.mean_reflection_error) + ',' + format_double(rep.expected_sector_count) +
                  ',' + std::to_string(rep.vertices_below_n0) + '\n';
    });
    flush_logs(log, logs);
    std::string csv =
        "n,r,delta,alpha,seed,sectors_tested,sectors_empty,max_reflection_error,mean_reflection_error,"
        "expected_sector_count,vertices_below_n0\n";
    for (const auto& r : rows) csv += r;
    write_text(ctx.out / "coverage.csv", csv);
    for (auto b : below)
        if (b > 0) return exit_coverage;
    return exit_ok;
}

}  // namespace rggenv
