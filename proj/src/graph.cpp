#include "rggenv/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "rggenv/errors.hpp"

namespace rggenv {

ProximityGraph::ProximityGraph(const PointCloud* cloud, double r, std::vector<std::size_t> offsets,
                               std::vector<Index> neighbors)
    : cloud_(cloud), r_(r), offsets_(std::move(offsets)), neighbors_(std::move(neighbors)) {}

namespace {

// Uniform grid over [0,1]^d with cells of side 1/m >= r.
struct CellGrid {
    int dim;
    int per_axis;
    std::vector<std::size_t> cell_start;  // size cells + 1
    std::vector<Index> members;           // points sorted by cell, ascending within a cell

    std::size_t cell_count() const { return cell_start.size() - 1; }

    int axis_cell(double c) const {
        return std::clamp(static_cast<int>(c * per_axis), 0, per_axis - 1);
    }
};

CellGrid make_grid(const PointCloud& cloud, double cell_side_min) {
    CellGrid grid;
    grid.dim = cloud.dim();
    grid.per_axis = std::max(1, static_cast<int>(std::floor(1.0 / cell_side_min)));
    // Keep the cell count bounded for tiny radii in higher dimensions.
    while (std::pow(static_cast<double>(grid.per_axis), grid.dim) > 4.0e7 && grid.per_axis > 1)
        grid.per_axis /= 2;
    std::size_t cells = 1;
    for (int k = 0; k < grid.dim; ++k) cells *= static_cast<std::size_t>(grid.per_axis);

    std::vector<std::size_t> cell_of(cloud.size());
    grid.cell_start.assign(cells + 1, 0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        std::size_t c = 0;
        for (int k = grid.dim - 1; k >= 0; --k) c = c * grid.per_axis + grid.axis_cell(p[k]);
        cell_of[i] = c;
        ++grid.cell_start[c + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) grid.cell_start[c + 1] += grid.cell_start[c];
    grid.members.resize(cloud.size());
    std::vector<std::size_t> fill(grid.cell_start.begin(), grid.cell_start.end() - 1);
    for (std::size_t i = 0; i < cloud.size(); ++i)
        grid.members[fill[cell_of[i]]++] = static_cast<Index>(i);
    return grid;
}

// Calls visit(cell) for every cell within Chebyshev distance `reach` of `base`.
template <class Visit>
void for_each_cell_near(const CellGrid& grid, const std::vector<int>& base, int reach, Visit&& visit) {
    const int d = grid.dim;
    std::vector<int> offset(d, -reach);
    while (true) {
        std::size_t c = 0;
        bool inside = true;
        for (int k = d - 1; k >= 0; --k) {
            const int a = base[k] + offset[k];
            if (a < 0 || a >= grid.per_axis) {
                inside = false;
                break;
            }
            c = c * grid.per_axis + a;
        }
        if (inside) visit(c, offset);
        int k = 0;
        while (k < d && offset[k] == reach) offset[k++] = -reach;
        if (k == d) break;
        ++offset[k];
    }
}

}  // namespace

ProximityGraph build_graph(const PointCloud& cloud, double r) {
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::invalid_parameter, "connection radius must lie in (0,1)");
    const CellGrid grid = make_grid(cloud, r);
    // Cells may have been coarsened, in which case reach covers the radius.
    const int reach = std::max(1, static_cast<int>(std::ceil(r * grid.per_axis)));
    const double r2 = r * r;
    const int d = cloud.dim();

    std::vector<std::size_t> offsets(cloud.size() + 1, 0);
    std::vector<Index> neighbors;
    std::vector<Index> scratch;
    std::vector<int> base(d);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        for (int k = 0; k < d; ++k) base[k] = grid.axis_cell(p[k]);
        scratch.clear();
        for_each_cell_near(grid, base, reach, [&](std::size_t c, const std::vector<int>&) {
            for (std::size_t s = grid.cell_start[c]; s < grid.cell_start[c + 1]; ++s) {
                const Index j = grid.members[s];
                if (j != i && squared_distance(p, cloud.point(j)) < r2) scratch.push_back(j);
            }
        });
        std::sort(scratch.begin(), scratch.end());
        neighbors.insert(neighbors.end(), scratch.begin(), scratch.end());
        offsets[i + 1] = neighbors.size();
    }
    return ProximityGraph(&cloud, r, std::move(offsets), std::move(neighbors));
}

VertexClassification largest_component(const ProximityGraph& graph) {
    const std::size_t n = graph.size();
    VertexClassification result;
    result.component_id.assign(n, -1);
    result.role.assign(n, VertexRole::outside_component);

    // Components are labelled in order of their smallest vertex, so a strict
    // size comparison keeps the smallest-index component on ties.
    int next_id = 0;
    int best_id = -1;
    std::size_t best_size = 0;
    std::deque<Index> queue;
    for (std::size_t start = 0; start < n; ++start) {
        if (result.component_id[start] >= 0) continue;
        const int id = next_id++;
        std::size_t size = 0;
        result.component_id[start] = id;
        queue.push_back(static_cast<Index>(start));
        while (!queue.empty()) {
            const Index v = queue.front();
            queue.pop_front();
            ++size;
            for (Index w : graph.neighbors(v)) {
                if (result.component_id[w] < 0) {
                    result.component_id[w] = id;
                    queue.push_back(w);
                }
            }
        }
        if (size > best_size) {
            best_size = size;
            best_id = id;
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (result.component_id[v] == best_id) {
            result.component_vertices.push_back(static_cast<Index>(v));
            result.role[v] = VertexRole::boundary;
        }
    }
    return result;
}

void classify_vertices(VertexClassification& classification, const PointCloud& cloud,
                       const DomainSpec& domain) {
    classification.interior.clear();
    classification.boundary.clear();
    for (Index v : classification.component_vertices) {
        if (domain.contains(cloud.point(v))) {
            classification.interior.push_back(v);
            classification.role[v] = VertexRole::interior;
        } else {
            classification.boundary.push_back(v);
            classification.role[v] = VertexRole::boundary;
        }
    }
}

VertexClassification classify(const ProximityGraph& graph, const DomainSpec& domain) {
    if (graph.cloud().dim() != domain.dim())
        throw Error(ErrorKind::invalid_dimension, "domain and cloud dimensions differ");
    VertexClassification c = largest_component(graph);
    classify_vertices(c, graph.cloud(), domain);
    return c;
}

std::vector<Index> annulus_neighbors(const ProximityGraph& graph, Index x, double delta) {
    const double inner = (1.0 - delta) * graph.radius();
    const double inner2 = inner * inner;
    const auto px = graph.cloud().point(x);
    std::vector<Index> out;
    for (Index y : graph.neighbors(x))
        if (squared_distance(px, graph.cloud().point(y)) > inner2) out.push_back(y);
    return out;
}

Reflection reflect_within(const PointCloud& cloud, Index x, Index y, std::span<const Index> annulus) {
    if (annulus.empty()) throw MissingAnnulusError(x);
    const int d = cloud.dim();
    const auto px = cloud.point(x);
    const auto py = cloud.point(y);
    Point target(d);
    for (int k = 0; k < d; ++k) target[k] = 2.0 * px[k] - py[k];

    Index best = annulus[0];
    double best_value = std::numeric_limits<double>::infinity();
    for (Index z : annulus) {
        // |z + y - 2x|^2, evaluated as |z - (2x - y)|^2.
        const double value = squared_distance(cloud.point(z), target);
        if (value < best_value) {
            best_value = value;
            best = z;
        } else if (value == best_value) {
            const auto pz = cloud.point(z);
            const auto pb = cloud.point(best);
            if (lexicographic_less(pz, pb) ||
                (!lexicographic_less(pb, pz) && z < best))
                best = z;
        }
    }
    return {best, std::sqrt(best_value), best == y};
}

Reflection reflect(const ProximityGraph& graph, Index x, Index y, double delta) {
    const auto annulus = annulus_neighbors(graph, x, delta);
    return reflect_within(graph.cloud(), x, y, annulus);
}

// ---------------------------------------------------------------------------
// AnnulusTable

AnnulusTable::AnnulusTable(const ProximityGraph& graph, const VertexClassification& classification,
                           double delta)
    : graph_(&graph), delta_(delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::invalid_parameter, "delta must lie in (0,1)");
    const auto npos = std::numeric_limits<std::size_t>::max();
    slot_.assign(graph.size(), npos);
    offsets_.push_back(0);
    const PointCloud& cloud = graph.cloud();
    for (Index x : classification.interior) {
        slot_[x] = offsets_.size() - 1;
        const auto annulus = annulus_neighbors(graph, x, delta);
        double worst = 0.0;
        if (annulus.empty()) empty_.push_back(x);
        for (Index y : annulus) {
            const Reflection refl = reflect_within(cloud, x, y, annulus);
            moves_.push_back({y, refl.vertex});
            worst = std::max(worst, refl.residual);
            if (refl.degenerate) ++degenerate_;
        }
        offsets_.push_back(moves_.size());
        max_error_.push_back(worst);
    }
}

std::span<const AnnulusTable::Move> AnnulusTable::moves(Index x) const {
    const std::size_t s = slot_.at(x);
    if (s == std::numeric_limits<std::size_t>::max()) return {};
    return {moves_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
}

void AnnulusTable::require_complete() const {
    if (!empty_.empty()) throw MissingAnnulusError(empty_.front());
}

double AnnulusTable::max_reflection_error(Index x) const {
    const std::size_t s = slot_.at(x);
    if (s == std::numeric_limits<std::size_t>::max()) return 0.0;
    return max_error_[s];
}

}  // namespace rggenv
