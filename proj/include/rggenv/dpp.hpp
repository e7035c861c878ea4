#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rggenv/graph.hpp"

namespace rggenv {

/// Payoff f on D^c ∩ [0,1]^d.
struct BoundaryDatum {
    std::string id;
    std::function<double(std::span<const double>)> eval;

    double operator()(std::span<const double> x) const { return eval(x); }

    /// max |f| over the boundary vertices of the classification.
    double sup_norm(const PointCloud& cloud, const VertexClassification& classification) const;
};

/// Values on the chosen component, indexed by cloud vertex. Vertices outside
/// the component hold NaN.
struct ValueField {
    std::vector<double> values;
    std::size_t sweeps = 0;
    double residual = 0.0;
    std::string datum_id;

    double operator[](Index i) const { return values[i]; }
};

struct SweepResult {
    std::vector<double> values;
    double residual = 0.0;
};

/// One Jacobi sweep of u(x) <- min_y (u(y) + u(y_x)) / 2 over the interior.
/// Reads come from `values` only; boundary entries are copied unchanged.
SweepResult dpp_sweep(std::span<const double> values, const AnnulusTable& table,
                      const VertexClassification& classification);

enum class SweepOrder { jacobi, gauss_seidel };

/// Constant the iteration starts from on the interior. The first two are
/// subsolutions (iterates increase), boundary_maximum is a supersolution
/// (iterates decrease).
enum class PerronStart { boundary_minimum, negative_sup_norm, boundary_maximum };

struct SolverOptions {
    std::optional<double> tol;  // default 1e-9 * max(1, |f|_inf)
    std::size_t max_sweeps = 1'000'000;
    SweepOrder order = SweepOrder::jacobi;
    PerronStart start = PerronStart::boundary_minimum;
    /// Called after each sweep with the sweep number (1-based) and the field.
    std::function<void(std::size_t, std::span<const double>)> observer;
};

/// Value iteration from a constant subsolution (min_B f or -|f|_inf). Throws
/// NonConvergenceError, MissingAnnulusError, or a degenerate-experiment error
/// when the interior or the boundary is empty.
ValueField solve_dpp(const AnnulusTable& table, const VertexClassification& classification,
                     const BoundaryDatum& f, const SolverOptions& options = {});

/// min_y (u(y) + u(y_x)) / 2 at an interior vertex.
double min_average(std::span<const double> values, const AnnulusTable& table, Index x);

/// >= 0 certifies a subsolution: min over the interior of [min_avg - u] and
/// over the boundary of [f - u].
double check_subsolution(std::span<const double> values, const AnnulusTable& table,
                         const VertexClassification& classification, const BoundaryDatum& f);

/// >= 0 certifies a supersolution: signs mirrored.
double check_supersolution(std::span<const double> values, const AnnulusTable& table,
                           const VertexClassification& classification, const BoundaryDatum& f);

/// A minimizing move at x, lowest y on ties.
AnnulusTable::Move greedy_policy(std::span<const double> values, const AnnulusTable& table, Index x);

}  // namespace rggenv
