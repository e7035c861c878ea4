#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rggenv/geometry.hpp"

namespace rggenv {

/// Radius-r proximity graph in compressed adjacency layout. Neighbor lists are
/// ascending and duplicate free; j is a neighbor of i iff i != j and |x_i - x_j| < r.
class ProximityGraph {
public:
    ProximityGraph() = default;
    ProximityGraph(const PointCloud* cloud, double r, std::vector<std::size_t> offsets,
                   std::vector<Index> neighbors);

    const PointCloud& cloud() const { return *cloud_; }
    double radius() const noexcept { return r_; }
    std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

    std::span<const Index> neighbors(Index i) const {
        return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

    const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
    const std::vector<Index>& adjacency() const noexcept { return neighbors_; }

private:
    const PointCloud* cloud_ = nullptr;
    double r_ = 0.0;
    std::vector<std::size_t> offsets_;
    std::vector<Index> neighbors_;
};

/// Grid-indexed construction (cells of side >= r, 3^d neighborhood per point).
/// The cloud must outlive the graph.
ProximityGraph build_graph(const PointCloud& cloud, double r);

enum class VertexRole : unsigned char { outside_component, interior, boundary };

struct VertexClassification {
    std::vector<int> component_id;       // per cloud vertex
    std::vector<Index> component_vertices;  // largest component, ascending
    std::vector<Index> interior;         // component ∩ D
    std::vector<Index> boundary;         // component \ D
    std::vector<VertexRole> role;        // per cloud vertex

    bool is_interior(Index i) const { return role[i] == VertexRole::interior; }
    bool is_boundary(Index i) const { return role[i] == VertexRole::boundary; }
    bool in_component(Index i) const { return role[i] != VertexRole::outside_component; }
};

/// Connected components by breadth-first search; keeps the largest, ties going
/// to the component with the smallest vertex index. Interior/boundary are left
/// empty and role marks every component vertex as boundary until classified.
VertexClassification largest_component(const ProximityGraph& graph);

/// Splits the chosen component into interior (contains(x)) and boundary.
void classify_vertices(VertexClassification& classification, const PointCloud& cloud,
                       const DomainSpec& domain);

VertexClassification classify(const ProximityGraph& graph, const DomainSpec& domain);

/// Neighbors y of x with (1 - delta) r < |x - y|, ascending.
std::vector<Index> annulus_neighbors(const ProximityGraph& graph, Index x, double delta);

struct Reflection {
    Index vertex;
    double residual;  // |y_x + y - 2x|
    bool degenerate;  // y_x == y
};

/// Quasi-reflection of y through x inside the annulus: argmin over annulus
/// members z of |z + y - 2x|^2, ties by coordinates then index.
Reflection reflect(const ProximityGraph& graph, Index x, Index y, double delta);
Reflection reflect_within(const PointCloud& cloud, Index x, Index y, std::span<const Index> annulus);

/// Annulus members and their quasi-reflections for every interior vertex,
/// precomputed once per (graph, delta). Vertices with an empty annulus are
/// recorded rather than rejected; solver layers decide whether that is fatal.
class AnnulusTable {
public:
    struct Move {
        Index y;
        Index reflected;
    };

    AnnulusTable() = default;
    AnnulusTable(const ProximityGraph& graph, const VertexClassification& classification,
                 double delta);

    double delta() const noexcept { return delta_; }
    const ProximityGraph& graph() const { return *graph_; }

    /// Moves available at an interior vertex (ascending in y).
    std::span<const Move> moves(Index x) const;
    bool has_moves(Index x) const { return !moves(x).empty(); }

    /// Interior vertices whose annulus is empty, ascending.
    const std::vector<Index>& empty_vertices() const noexcept { return empty_; }

    /// Throws MissingAnnulusError naming the first empty vertex.
    void require_complete() const;

    /// Largest |y_x - (2x - y)| over all stored moves at x (0 when none).
    double max_reflection_error(Index x) const;

    std::size_t degenerate_count() const noexcept { return degenerate_; }

private:
    const ProximityGraph* graph_ = nullptr;
    double delta_ = 0.0;
    std::vector<std::size_t> slot_;  // per cloud vertex, index into offsets_ or npos
    std::vector<std::size_t> offsets_;
    std::vector<Move> moves_;
    std::vector<double> max_error_;
    std::vector<Index> empty_;
    std::size_t degenerate_ = 0;
};

struct CoverageReport {
    std::size_t sectors_tested = 0;
    std::size_t sectors_empty = 0;
    double max_reflection_error = 0.0;   // normalized by r
    double mean_reflection_error = 0.0;  // normalized by r
    double expected_sector_count = 0.0;  // n * |S(r, delta, alpha)|
    std::size_t vertices_below_n0 = 0;   // interior vertices with an empty annulus
};

/// Unit directions with angular spacing at most `spacing`: the normalized
/// lattice of step `spacing` on the faces of the cube [-1,1]^d.
std::vector<Point> direction_net(int dim, double spacing);

/// Volume of S(r, delta, alpha) = annulus ∩ cone{|z_perp| <= alpha z_d}.
double sector_volume(int dim, double r, double delta, double alpha);

/// True when x + R S(r, delta, alpha) contains one of the candidate points,
/// with R any rotation taking e_d to `direction`.
bool sector_occupied(const PointCloud& cloud, Index x, std::span<const double> direction,
                     std::span<const Index> candidates, double r, double delta, double alpha);

CoverageReport coverage_report(const ProximityGraph& graph,
                               const VertexClassification& classification,
                               const AnnulusTable& table, const GraphParams& params,
                               double direction_net_spacing);

}  // namespace rggenv
