#include "rggenv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rggenv/errors.hpp"

namespace rggenv {

// ---------------------------------------------------------------------------
// NearestVertexIndex

NearestVertexIndex::NearestVertexIndex(const PointCloud& cloud, std::span<const Index> vertices)
    : cloud_(&cloud), count_(vertices.size()) {
    if (vertices.empty()) throw Error(ErrorKind::degenerate_experiment, "cannot index an empty component");
    const int d = cloud.dim();
    per_axis_ = std::max(1, static_cast<int>(std::floor(std::pow(static_cast<double>(count_), 1.0 / d))));
    std::size_t cells = 1;
    for (int k = 0; k < d; ++k) cells *= static_cast<std::size_t>(per_axis_);

    auto cell_of = [&](Index v) {
        const auto p = cloud.point(v);
        std::size_t c = 0;
        for (int k = d - 1; k >= 0; --k)
            c = c * per_axis_ + std::clamp(static_cast<int>(p[k] * per_axis_), 0, per_axis_ - 1);
        return c;
    };
    cell_start_.assign(cells + 1, 0);
    for (Index v : vertices) ++cell_start_[cell_of(v) + 1];
    for (std::size_t c = 0; c < cells; ++c) cell_start_[c + 1] += cell_start_[c];
    members_.resize(count_);
    std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
    for (Index v : vertices) members_[fill[cell_of(v)]++] = v;
}

Index NearestVertexIndex::nearest(std::span<const double> x) const {
    const int d = cloud_->dim();
    const double h = 1.0 / per_axis_;
    std::vector<int> base(d);
    for (int k = 0; k < d; ++k) base[k] = std::clamp(static_cast<int>(x[k] * per_axis_), 0, per_axis_ - 1);

    Index best = members_.front();
    double best_d2 = std::numeric_limits<double>::infinity();
    auto consider = [&](Index v) {
        const auto p = cloud_->point(v);
        const double d2 = squared_distance(x, p);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = v;
        } else if (d2 == best_d2) {
            const auto pb = cloud_->point(best);
            if (lexicographic_less(p, pb) || (!lexicographic_less(pb, p) && v < best)) best = v;
        }
    };

    std::vector<int> offset(d);
    for (int ring = 0; ring <= per_axis_; ++ring) {
        std::fill(offset.begin(), offset.end(), -ring);
        while (true) {
            int cheb = 0;
            for (int k = 0; k < d; ++k) cheb = std::max(cheb, std::abs(offset[k]));
            if (cheb == ring) {
                std::size_t c = 0;
                bool inside = true;
                for (int k = d - 1; k >= 0; --k) {
                    const int a = base[k] + offset[k];
                    if (a < 0 || a >= per_axis_) {
                        inside = false;
                        break;
                    }
                    c = c * per_axis_ + a;
                }
                if (inside)
                    for (std::size_t s = cell_start_[c]; s < cell_start_[c + 1]; ++s) consider(members_[s]);
            }
            int k = 0;
            while (k < d && offset[k] == ring) offset[k++] = -ring;
            if (k == d) break;
            ++offset[k];
        }
        // Anything in a later ring is at least ring * h away.
        if (std::isfinite(best_d2) && std::sqrt(best_d2) < ring * h) break;
    }
    return best;
}

double extend_values(std::span<const double> values, const NearestVertexIndex& index,
                     std::span<const double> x) {
    return values[index.nearest(x)];
}

std::vector<Point> evaluation_points(const DomainSpec& domain, int resolution, double margin) {
    if (resolution < 1) throw Error(ErrorKind::invalid_parameter, "evaluation grid resolution must be positive");
    const int d = domain.dim();
    std::vector<Point> pts;
    std::vector<int> idx(d, 0);
    Point x(d);
    while (true) {
        for (int k = 0; k < d; ++k) x[k] = (idx[k] + 0.5) / resolution;
        if (domain.boundary_distance(x) <= -margin) pts.push_back(x);
        int k = 0;
        while (k < d && idx[k] == resolution - 1) idx[k++] = 0;
        if (k == d) break;
        ++idx[k];
    }
    return pts;
}

ErrorSummary sup_error(std::span<const double> values, const NearestVertexIndex& index,
                       const DomainSpec& domain,
                       const std::function<double(std::span<const double>)>& reference,
                       const EvalGrid& grid, double r) {
    const double margin = grid.margin.value_or(0.5 * r);
    const auto pts = evaluation_points(domain, grid.resolution, margin);
    if (pts.empty()) throw Error(ErrorKind::invalid_parameter, "evaluation grid is empty");
    ErrorSummary s;
    double sum = 0.0;
    for (const auto& x : pts) {
        const double e = std::abs(extend_values(values, index, x) - reference(x));
        s.sup = std::max(s.sup, e);
        sum += e;
    }
    s.points = pts.size();
    s.mean = sum / static_cast<double>(pts.size());
    return s;
}

ErrorSummary sup_error(std::span<const double> values, const NearestVertexIndex& index,
                       const EnvelopeCase& c, const EvalGrid& grid, double r) {
    return sup_error(values, index, c.domain,
                     [&c](std::span<const double> x) { return analytic_envelope(c, x); }, grid, r);
}

// ---------------------------------------------------------------------------
// Consistency

double discrete_operator(const AnnulusTable& table, const SmoothTestFunction& phi, Index x) {
    const auto moves = table.moves(x);
    if (moves.empty()) throw MissingAnnulusError(x);
    const PointCloud& cloud = table.graph().cloud();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : moves)
        best = std::min(best, 0.5 * (phi.value(cloud.point(m.y)) + phi.value(cloud.point(m.reflected))));
    return best - phi.value(cloud.point(x));
}

ConsistencyReport consistency_report(const AnnulusTable& table,
                                     const VertexClassification& classification,
                                     const SmoothTestFunction& phi) {
    const PointCloud& cloud = table.graph().cloud();
    const double r = table.graph().radius();
    const double r2 = r * r;
    ConsistencyReport rep;
    rep.residuals.reserve(classification.interior.size());
    rep.bounds.reserve(classification.interior.size());
    for (Index x : classification.interior) {
        const auto px = cloud.point(x);
        const double target = 0.5 * r2 * lambda_min(phi.hessian(px));
        const double residual = std::abs(discrete_operator(table, phi, x) - target) / r2;
        const double bound = 4.0 * phi.hessian_bound * table.delta() +
                             phi.lipschitz_bound * table.max_reflection_error(x) / r2;
        rep.residuals.push_back(residual);
        rep.bounds.push_back(bound);
        if (residual > bound) ++rep.bound_violations;
        rep.max_normalized_residual = std::max(rep.max_normalized_residual, residual);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Barrier

double Barrier::operator()(std::span<const double> x) const {
    double along = 0.0, dist2 = 0.0;
    for (std::size_t k = 0; k < anchor.size(); ++k) {
        const double v = x[k] - anchor[k];
        along += v * inward_normal[k];
        dist2 += v * v;
    }
    return -slope * along + 0.5 * eta * dist2 + anchor_value - 0.5 * eta;
}

Barrier make_barrier(const DomainSpec& domain, std::span<const double> y0, double slope, double eta,
                     double anchor_value) {
    if (std::abs(domain.boundary_distance(y0)) > 1e-9)
        throw Error(ErrorKind::invalid_parameter, "barrier anchor must lie on the domain boundary");
    if (!(eta > 0.0)) throw Error(ErrorKind::invalid_parameter, "barrier eta must be positive");
    Barrier b;
    b.anchor.assign(y0.begin(), y0.end());
    b.inward_normal = domain.outward_normal(y0);
    for (double& v : b.inward_normal) v = -v;
    b.slope = slope;
    b.eta = eta;
    b.anchor_value = anchor_value;
    return b;
}

double barrier_slope(const DomainSpec& domain, double lipschitz, double eta) {
    const auto& e = domain.radii();
    const double emax = *std::max_element(e.begin(), e.end());
    const double emin = *std::min_element(e.begin(), e.end());
    const double curvature_radius = emax * emax / emin;
    return curvature_radius * (lipschitz * lipschitz / eta + eta);
}

std::vector<Index> active_boundary(const AnnulusTable& table, const VertexClassification& classification) {
    std::vector<char> seen(table.graph().size(), 0);
    for (Index x : classification.interior)
        for (const auto& m : table.moves(x)) {
            if (classification.is_boundary(m.y)) seen[m.y] = 1;
            if (classification.is_boundary(m.reflected)) seen[m.reflected] = 1;
        }
    std::vector<Index> out;
    for (Index b : classification.boundary)
        if (seen[b]) out.push_back(b);
    return out;
}

std::vector<double> barrier_values(const PointCloud& cloud, const VertexClassification& classification,
                                   const Barrier& barrier) {
    std::vector<double> v(cloud.size(), std::numeric_limits<double>::quiet_NaN());
    for (Index i : classification.component_vertices) v[i] = barrier(cloud.point(i));
    return v;
}

BarrierReport barrier_residual(const AnnulusTable& table, const VertexClassification& classification,
                               const Barrier& barrier, const BoundaryDatum& f) {
    const PointCloud& cloud = table.graph().cloud();
    BarrierReport rep;
    rep.max_excess = -std::numeric_limits<double>::infinity();
    for (Index b : active_boundary(table, classification)) {
        const double excess = barrier(cloud.point(b)) - f(cloud.point(b));
        rep.max_excess = std::max(rep.max_excess, excess);
        if (excess > 0.0 && rep.precondition_ok) {
            rep.precondition_ok = false;
            rep.offending_vertex = b;
        }
    }
    const auto v = barrier_values(cloud, classification, barrier);
    rep.min_residual = std::numeric_limits<double>::infinity();
    for (Index x : classification.interior)
        rep.min_residual = std::min(rep.min_residual, min_average(v, table, x) - v[x]);
    return rep;
}

}  // namespace rggenv
