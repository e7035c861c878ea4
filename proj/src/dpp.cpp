#include "rggenv/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rggenv/errors.hpp"

namespace rggenv {

double BoundaryDatum::sup_norm(const PointCloud& cloud,
                               const VertexClassification& classification) const {
    double m = 0.0;
    for (Index b : classification.boundary) m = std::max(m, std::abs(eval(cloud.point(b))));
    return m;
}

double min_average(std::span<const double> values, const AnnulusTable& table, Index x) {
    const auto moves = table.moves(x);
    if (moves.empty()) throw MissingAnnulusError(x);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : moves) best = std::min(best, 0.5 * (values[m.y] + values[m.reflected]));
    return best;
}

SweepResult dpp_sweep(std::span<const double> values, const AnnulusTable& table,
                      const VertexClassification& classification) {
    SweepResult out;
    out.values.assign(values.begin(), values.end());
    for (Index x : classification.interior) {
        const double v = min_average(values, table, x);
        out.residual = std::max(out.residual, std::abs(v - values[x]));
        out.values[x] = v;
    }
    return out;
}

ValueField solve_dpp(const AnnulusTable& table, const VertexClassification& classification,
                     const BoundaryDatum& f, const SolverOptions& options) {
    if (classification.interior.empty())
        throw Error(ErrorKind::degenerate_experiment, "no interior vertices in the largest component");
    if (classification.boundary.empty())
        throw Error(ErrorKind::degenerate_experiment, "no boundary vertices in the largest component");
    table.require_complete();

    const PointCloud& cloud = table.graph().cloud();
    const double bound = f.sup_norm(cloud, classification);
    const double tol = options.tol.value_or(1e-9 * std::max(1.0, bound));
    if (!(tol > 0.0)) throw Error(ErrorKind::invalid_parameter, "solver tolerance must be positive");

    // Both seeds are constant subsolutions, so the iterates increase
    // monotonically to the fixed point; min_B f is the tighter one.
    std::vector<double> current(cloud.size(), std::numeric_limits<double>::quiet_NaN());
    double seed = std::numeric_limits<double>::infinity(), top = -seed;
    for (Index b : classification.boundary) {
        current[b] = f(cloud.point(b));
        seed = std::min(seed, current[b]);
        top = std::max(top, current[b]);
    }
    if (options.start == PerronStart::negative_sup_norm) seed = -bound;
    if (options.start == PerronStart::boundary_maximum) seed = top;
    for (Index x : classification.interior) current[x] = seed;

    // Flattened copy of the interior moves for the sweep loop.
    const auto& interior = classification.interior;
    std::vector<std::size_t> move_start(interior.size() + 1, 0);
    std::vector<Index> move_a, move_b;
    for (std::size_t i = 0; i < interior.size(); ++i) {
        for (const auto& m : table.moves(interior[i])) {
            move_a.push_back(m.y);
            move_b.push_back(m.reflected);
        }
        move_start[i + 1] = move_a.size();
    }
    auto evaluate = [&](const std::vector<double>& u, std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = move_start[i]; k < move_start[i + 1]; ++k)
            best = std::min(best, 0.5 * (u[move_a[k]] + u[move_b[k]]));
        return best;
    };

    std::vector<double> next = current;
    std::vector<double> history;
    for (std::size_t sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        double residual = 0.0;
        if (options.order == SweepOrder::jacobi) {
            for (std::size_t i = 0; i < interior.size(); ++i) {
                const double v = evaluate(current, i);
                residual = std::max(residual, std::abs(v - current[interior[i]]));
                next[interior[i]] = v;
            }
            std::swap(current, next);
        } else {
            for (std::size_t i = 0; i < interior.size(); ++i) {
                const double v = evaluate(current, i);
                residual = std::max(residual, std::abs(v - current[interior[i]]));
                current[interior[i]] = v;
            }
        }
        history.push_back(residual);
        if (options.observer) options.observer(sweep, current);
        if (residual <= tol) {
            ValueField field;
            field.values = std::move(current);
            field.sweeps = sweep;
            field.residual = residual;
            field.datum_id = f.id;
            return field;
        }
    }
    throw NonConvergenceError(std::move(history));
}

double check_subsolution(std::span<const double> values, const AnnulusTable& table,
                         const VertexClassification& classification, const BoundaryDatum& f) {
    const PointCloud& cloud = table.graph().cloud();
    double worst = std::numeric_limits<double>::infinity();
    for (Index x : classification.interior)
        worst = std::min(worst, min_average(values, table, x) - values[x]);
    for (Index b : classification.boundary) worst = std::min(worst, f(cloud.point(b)) - values[b]);
    return worst;
}

double check_supersolution(std::span<const double> values, const AnnulusTable& table,
                           const VertexClassification& classification, const BoundaryDatum& f) {
    const PointCloud& cloud = table.graph().cloud();
    double worst = std::numeric_limits<double>::infinity();
    for (Index x : classification.interior)
        worst = std::min(worst, values[x] - min_average(values, table, x));
    for (Index b : classification.boundary) worst = std::min(worst, values[b] - f(cloud.point(b)));
    return worst;
}

AnnulusTable::Move greedy_policy(std::span<const double> values, const AnnulusTable& table, Index x) {
    const auto moves = table.moves(x);
    if (moves.empty()) throw MissingAnnulusError(x);
    const AnnulusTable::Move* best = &moves[0];
    double best_value = 0.5 * (values[best->y] + values[best->reflected]);
    for (const auto& m : moves.subspan(1)) {
        const double v = 0.5 * (values[m.y] + values[m.reflected]);
        if (v < best_value) {
            best_value = v;
            best = &m;
        }
    }
    return *best;
}

}  // namespace rggenv
