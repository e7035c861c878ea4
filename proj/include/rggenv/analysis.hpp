#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rggenv/dpp.hpp"
#include "rggenv/envelope.hpp"

namespace rggenv {

// ---------------------------------------------------------------------------
// Extension of graph values to the continuum

/// Nearest-vertex lookup over the chosen component. Equidistant vertices
/// resolve to the lexicographically smaller point, then the smaller index.
class NearestVertexIndex {
public:
    NearestVertexIndex(const PointCloud& cloud, std::span<const Index> vertices);

    Index nearest(std::span<const double> x) const;
    std::size_t size() const noexcept { return count_; }

private:
    const PointCloud* cloud_;
    int per_axis_ = 1;
    std::size_t count_ = 0;
    std::vector<std::size_t> cell_start_;
    std::vector<Index> members_;
};

/// u(T(x)) where T(x) is the nearest component vertex.
double extend_values(std::span<const double> values, const NearestVertexIndex& index,
                     std::span<const double> x);

struct EvalGrid {
    int resolution = 50;            // lattice points (i + 1/2) / resolution per axis
    std::optional<double> margin;   // distance kept from the boundary; default r / 2
};

/// Lattice points with boundary_distance(x) <= -margin.
std::vector<Point> evaluation_points(const DomainSpec& domain, int resolution, double margin);

struct ErrorSummary {
    double sup = 0.0;
    double mean = 0.0;
    std::size_t points = 0;
};

/// sup and mean of |extend_values - reference| over the evaluation lattice.
ErrorSummary sup_error(std::span<const double> values, const NearestVertexIndex& index,
                       const DomainSpec& domain,
                       const std::function<double(std::span<const double>)>& reference,
                       const EvalGrid& grid, double r);

ErrorSummary sup_error(std::span<const double> values, const NearestVertexIndex& index,
                       const EnvelopeCase& c, const EvalGrid& grid, double r);

// ---------------------------------------------------------------------------
// Consistency of the discrete operator

/// min_y (phi(y) + phi(y_x)) / 2 - phi(x) at an interior vertex.
double discrete_operator(const AnnulusTable& table, const SmoothTestFunction& phi, Index x);

struct ConsistencyReport {
    double max_normalized_residual = 0.0;
    std::vector<double> residuals;  // aligned with classification.interior
    std::vector<double> bounds;     // 4 C delta + C' |reflection error| / r^2, aligned likewise
    std::size_t bound_violations = 0;
};

/// residual(x) = |discrete_operator(x) - r^2/2 lambda_1(D^2 phi(x))| / r^2.
ConsistencyReport consistency_report(const AnnulusTable& table,
                                     const VertexClassification& classification,
                                     const SmoothTestFunction& phi);

// ---------------------------------------------------------------------------
// Boundary barrier

/// v(x) = -K <x - y0, n> + eta/2 |x - y0|^2 + f(y0) - eta/2, n the inward normal at y0.
struct Barrier {
    Point anchor;
    Point inward_normal;
    double slope = 0.0;
    double eta = 0.0;
    double anchor_value = 0.0;

    double operator()(std::span<const double> x) const;
};

Barrier make_barrier(const DomainSpec& domain, std::span<const double> y0, double slope, double eta,
                     double anchor_value);

/// Slope large enough that the barrier stays below any datum with Lipschitz
/// bound L on the boundary of a disc or ellipsoid (radius of curvature <= R):
/// K = R (L^2 / eta + eta).
double barrier_slope(const DomainSpec& domain, double lipschitz, double eta);

struct BarrierReport {
    double min_residual = 0.0;  // min over the interior of min_avg(v) - v
    bool precondition_ok = true;
    std::optional<Index> offending_vertex;  // first boundary vertex with v > f
    double max_excess = 0.0;                // max (v - f) over the checked boundary vertices
};

/// Checks v <= f on the boundary vertices the DPP reads (those reachable as
/// moves from the interior) and evaluates the subsolution residual of v.
BarrierReport barrier_residual(const AnnulusTable& table, const VertexClassification& classification,
                               const Barrier& barrier, const BoundaryDatum& f);

/// Barrier evaluated on the component (NaN elsewhere), for check_subsolution.
std::vector<double> barrier_values(const PointCloud& cloud, const VertexClassification& classification,
                                   const Barrier& barrier);

/// Boundary vertices that appear as a move from some interior vertex.
std::vector<Index> active_boundary(const AnnulusTable& table, const VertexClassification& classification);

// ---------------------------------------------------------------------------

struct ConvergenceRecord {
    std::size_t n = 0;
    double r = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    double sup_error = 0.0;
    double mean_error = 0.0;
    std::size_t sweeps = 0;
    double max_reflection_error = 0.0;
    double runtime_seconds = 0.0;
};

}  // namespace rggenv
