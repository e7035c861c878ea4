#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rggenv {

using Index = std::uint32_t;
using Point = std::vector<double>;

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return s;
}

/// Strict lexicographic comparison of two coordinate vectors.
bool lexicographic_less(std::span<const double> a, std::span<const double> b);

/// n points in [0,1]^d stored row-major. Index = sampling order.
class PointCloud {
public:
    PointCloud() = default;

    /// Wraps explicit coordinates (hand fixtures). Coordinates must lie in [0,1].
    static PointCloud from_coordinates(int dim, std::vector<double> coords,
                                       std::uint64_t seed = 0);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    std::uint64_t seed() const noexcept { return seed_; }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    const std::vector<double>& coordinates() const noexcept { return coords_; }

private:
    friend PointCloud sample_points(int dim, std::size_t n, std::uint64_t seed);

    int dim_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<double> coords_;
};

/// Uniform sample of n points in [0,1]^d. Coordinate k of point i depends only
/// on (seed, i, k), so the first m points of an n-sample equal the m-sample.
PointCloud sample_points(int dim, std::size_t n, std::uint64_t seed);

enum class DomainKind { ball, ellipsoid };

/// Ball or axis-aligned ellipsoid strictly inside the unit cube.
class DomainSpec {
public:
    static DomainSpec ball(Point center, double radius);
    static DomainSpec ellipsoid(Point center, Point radii);

    DomainKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return static_cast<int>(center_.size()); }
    const Point& center() const noexcept { return center_; }
    const Point& radii() const noexcept { return radii_; }

    /// Open-set membership.
    bool contains(std::span<const double> x) const;

    /// Signed Euclidean distance to the boundary: negative inside.
    double boundary_distance(std::span<const double> x) const;

    /// Point of the boundary in (hyper)spherical angles. d = 2 takes a single
    /// angle; d >= 3 takes d-1 angles (polar angles first, azimuth last).
    Point boundary_point(std::span<const double> angles) const;

    /// Outward unit normal at a boundary point.
    Point outward_normal(std::span<const double> boundary_x) const;

    /// Distance t > 0 along unit direction u from an interior point x to the
    /// boundary.
    double ray_exit(std::span<const double> x, std::span<const double> u) const;

    /// Distance from the closed domain to the complement of the open unit cube.
    double cube_margin() const;

private:
    DomainSpec(DomainKind kind, Point center, Point radii);

    DomainKind kind_;
    Point center_;
    Point radii_;
};

struct GraphParams {
    std::size_t n = 0;
    double r = 0.0;      // connection radius
    double delta = 0.0;  // annulus fraction: members satisfy (1-delta) r < |x-y| < r
    double alpha = 0.0;  // cone half-aperture parameter

    double inner_radius() const noexcept { return (1.0 - delta) * r; }
    void validate() const;
};

enum class ScheduleMode { paper, practical };

/// Exponent applied to the logarithm in the paper-mode radius,
/// r = ((log n)^p / sqrt(n))^(1/(2d)). p = 2 gives sqrt(n) r^(2d) / log n = log n.
inline constexpr double kPaperLogExponent = 2.0;

/// r, delta = r / sqrt(log n), alpha = r / (log n)^(1/(2(d-1))).
GraphParams schedule_params(std::size_t n, int dim, ScheduleMode mode, double explicit_r = 0.0,
                            double log_exponent = kPaperLogExponent);

}  // namespace rggenv
