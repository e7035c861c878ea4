#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rggenv/errors.hpp"
#include "rggenv/experiment.hpp"

namespace rggenv {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::config, "config: " + what); }

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) config_error("missing field '" + where + key + "'");
    return j.at(key);
}

template <class T>
T get_as(const json& j, const std::string& field) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        config_error("field '" + field + "' has the wrong type");
    }
}

Point get_vector(const json& j, const std::string& field, int dim) {
    auto v = get_as<std::vector<double>>(j, field);
    if (static_cast<int>(v.size()) != dim)
        config_error("field '" + field + "' must have " + std::to_string(dim) + " entries");
    return v;
}

DomainSpec parse_domain(const json& j, int dim) {
    const auto kind = get_as<std::string>(require(j, "kind", "domain."), "domain.kind");
    Point center = get_vector(require(j, "center", "domain."), "domain.center", dim);
    try {
        if (kind == "ball")
            return DomainSpec::ball(std::move(center),
                                    get_as<double>(require(j, "radius", "domain."), "domain.radius"));
        if (kind == "ellipsoid")
            return DomainSpec::ellipsoid(std::move(center),
                                         get_vector(require(j, "radii", "domain."), "domain.radii", dim));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::config) throw;
        config_error(std::string("domain: ") + e.what());
    }
    config_error("domain.kind must be 'ball' or 'ellipsoid'");
}

EnvelopeCase parse_datum(const json& j, const DomainSpec& domain, int dim) {
    const auto kind = get_as<std::string>(require(j, "case", "datum."), "datum.case");
    try {
        if (kind == "constant")
            return EnvelopeCase::make_constant(domain, get_as<double>(require(j, "value", "datum."), "datum.value"));
        if (kind == "affine")
            return EnvelopeCase::make_affine(domain, get_vector(require(j, "slope", "datum."), "datum.slope", dim),
                                             get_as<double>(require(j, "offset", "datum."), "datum.offset"));
        if (kind == "saddle") return EnvelopeCase::make_saddle(domain);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::config) throw;
        config_error(std::string("datum: ") + e.what());
    }
    config_error("datum.case must be 'constant', 'affine' or 'saddle'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) config_error("top level must be an object");

    ExperimentConfig c;
    c.schema_version = get_as<int>(require(root, "schema_version", ""), "schema_version");
    if (c.schema_version != kSchemaVersion)
        config_error("unsupported schema_version " + std::to_string(c.schema_version));
    c.dim = get_as<int>(require(root, "dimension", ""), "dimension");
    if (c.dim < 2) config_error("dimension must be at least 2");
    c.domain = parse_domain(require(root, "domain", ""), c.dim);
    c.datum = parse_datum(require(root, "datum", ""), c.domain, c.dim);

    const json& sched = require(root, "schedule", "");
    const auto mode = get_as<std::string>(require(sched, "mode", "schedule."), "schedule.mode");
    if (mode == "paper") {
        c.mode = ScheduleMode::paper;
        for (auto n : get_as<std::vector<std::size_t>>(require(sched, "n", "schedule."), "schedule.n"))
            c.runs.push_back(RunRequest{n, {}, {}, {}});
    } else if (mode == "practical") {
        c.mode = ScheduleMode::practical;
        const json& runs = require(sched, "runs", "schedule.");
        if (!runs.is_array()) config_error("schedule.runs must be an array");
        for (const json& r : runs) {
            RunRequest req;
            if (r.contains("n")) req.n = get_as<std::size_t>(r.at("n"), "schedule.runs[].n");
            req.r = get_as<double>(require(r, "r", "schedule.runs[]."), "schedule.runs[].r");
            if (r.contains("delta")) req.delta = get_as<double>(r.at("delta"), "schedule.runs[].delta");
            if (r.contains("alpha")) req.alpha = get_as<double>(r.at("alpha"), "schedule.runs[].alpha");
            c.runs.push_back(req);
        }
    } else {
        config_error("schedule.mode must be 'paper' or 'practical'");
    }
    if (c.runs.empty()) config_error("at least one n is required");

    if (root.contains("points")) {
        std::vector<double> coords;
        for (const json& p : root.at("points")) {
            const Point q = get_vector(p, "points[]", c.dim);
            coords.insert(coords.end(), q.begin(), q.end());
        }
        for (double v : coords)
            if (!(v >= 0.0 && v <= 1.0)) config_error("points must lie in [0,1]^d");
        const std::size_t count = coords.size() / c.dim;
        for (auto& r : c.runs) {
            if (r.n == 0) r.n = count;
            if (r.n != count) config_error("schedule n must equal the number of fixture points");
        }
        c.fixture_points = std::move(coords);
    }
    for (const auto& r : c.runs) {
        if (r.n == 0) config_error("every run needs n");
        if (c.mode == ScheduleMode::practical && !(*r.r > 0.0 && *r.r < 1.0))
            config_error("schedule.runs[].r must lie in (0,1)");
        if (r.delta && !(*r.delta > 0.0 && *r.delta < 1.0)) config_error("delta must lie in (0,1)");
        if (r.alpha && !(*r.alpha > 0.0 && *r.alpha < 1.0)) config_error("alpha must lie in (0,1)");
    }

    c.seeds = get_as<std::vector<std::uint64_t>>(require(root, "seeds", ""), "seeds");
    if (c.seeds.empty()) config_error("at least one seed is required");

    if (root.contains("solver")) {
        const json& s = root.at("solver");
        if (s.contains("tol")) c.tol = get_as<double>(s.at("tol"), "solver.tol");
        if (s.contains("max_sweeps")) c.max_sweeps = get_as<std::size_t>(s.at("max_sweeps"), "solver.max_sweeps");
        if (s.contains("order")) {
            const auto o = get_as<std::string>(s.at("order"), "solver.order");
            if (o == "jacobi") c.order = SweepOrder::jacobi;
            else if (o == "gauss_seidel") c.order = SweepOrder::gauss_seidel;
            else config_error("solver.order must be 'jacobi' or 'gauss_seidel'");
        }
        if (s.contains("start")) {
            const auto o = get_as<std::string>(s.at("start"), "solver.start");
            if (o == "boundary_minimum") c.start = PerronStart::boundary_minimum;
            else if (o == "negative_sup_norm") c.start = PerronStart::negative_sup_norm;
            else if (o == "boundary_maximum") c.start = PerronStart::boundary_maximum;
            else config_error("solver.start must be 'boundary_minimum', 'negative_sup_norm' or 'boundary_maximum'");
        }
        if (c.tol && !(*c.tol > 0.0)) config_error("solver.tol must be positive");
        if (c.max_sweeps == 0) config_error("solver.max_sweeps must be positive");
    }
    if (root.contains("monte_carlo")) {
        const json& m = root.at("monte_carlo");
        auto& mc = c.monte_carlo;
        if (m.contains("episodes")) mc.episodes = get_as<std::size_t>(m.at("episodes"), "monte_carlo.episodes");
        if (m.contains("step_cap_factor"))
            mc.step_cap_factor = get_as<double>(m.at("step_cap_factor"), "monte_carlo.step_cap_factor");
        if (m.contains("starts")) mc.starts = get_as<std::size_t>(m.at("starts"), "monte_carlo.starts");
        if (m.contains("seed")) mc.seed = get_as<std::uint64_t>(m.at("seed"), "monte_carlo.seed");
        if (mc.episodes == 0) config_error("monte_carlo.episodes must be positive");
        if (!(mc.step_cap_factor > 0.0)) config_error("monte_carlo.step_cap_factor must be positive");
    }
    if (root.contains("eval_grid")) {
        const json& g = root.at("eval_grid");
        if (g.contains("resolution")) c.grid_resolution = get_as<int>(g.at("resolution"), "eval_grid.resolution");
        if (g.contains("margin")) c.grid_margin = get_as<double>(g.at("margin"), "eval_grid.margin");
        if (c.grid_resolution < 1) config_error("eval_grid.resolution must be positive");
    }
    if (root.contains("coverage") && root.at("coverage").contains("direction_spacing")) {
        c.direction_spacing = get_as<double>(root.at("coverage").at("direction_spacing"), "coverage.direction_spacing");
        if (!(*c.direction_spacing > 0.0)) config_error("coverage.direction_spacing must be positive");
    }
    if (root.contains("output_dir")) c.output_dir = get_as<std::string>(root.at("output_dir"), "output_dir");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "config: cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string RunSpec::name() const {
    return "run_n" + std::to_string(params.n) + "_seed" + std::to_string(seed);
}

std::vector<RunSpec> expand_runs(const ExperimentConfig& config) {
    std::vector<RunSpec> out;
    for (const auto& req : config.runs) {
        GraphParams p;
        if (req.n >= 3) {
            p = schedule_params(req.n, config.dim, config.mode, req.r.value_or(0.0));
        } else if (req.r && req.delta && req.alpha) {
            p = GraphParams{req.n, *req.r, *req.delta, *req.alpha};
        } else {
            throw Error(ErrorKind::schedule_undefined,
                        "run n=" + std::to_string(req.n) + ": schedule needs n >= 3 or explicit r, delta, alpha");
        }
        if (req.delta) p.delta = *req.delta;
        if (req.alpha) p.alpha = *req.alpha;
        try {
            p.validate();
        } catch (const Error& e) {
            config_error("run n=" + std::to_string(req.n) + ": " + e.what());
        }
        if (!(config.domain.cube_margin() > p.r))
            config_error("run n=" + std::to_string(req.n) +
                         ": domain margin to the cube boundary must exceed r");
        for (auto seed : config.seeds) out.push_back(RunSpec{p, seed});
    }
    std::stable_sort(out.begin(), out.end(), [](const RunSpec& a, const RunSpec& b) {
        return a.params.n != b.params.n ? a.params.n < b.params.n : a.seed < b.seed;
    });
    return out;
}

}  // namespace rggenv
