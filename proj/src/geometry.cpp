#include "rggenv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rggenv/errors.hpp"
#include "rggenv/random.hpp"

namespace rggenv {

bool lexicographic_less(std::span<const double> a, std::span<const double> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

PointCloud PointCloud::from_coordinates(int dim, std::vector<double> coords, std::uint64_t seed) {
    if (dim < 2) throw Error(ErrorKind::invalid_dimension, "dimension must be at least 2");
    if (coords.size() % static_cast<std::size_t>(dim) != 0)
        throw Error(ErrorKind::invalid_input, "coordinate count is not a multiple of the dimension");
    for (double c : coords)
        if (!(c >= 0.0 && c <= 1.0))
            throw Error(ErrorKind::invalid_input, "point coordinate outside [0,1]");
    PointCloud cloud;
    cloud.dim_ = dim;
    cloud.seed_ = seed;
    cloud.coords_ = std::move(coords);
    return cloud;
}

PointCloud sample_points(int dim, std::size_t n, std::uint64_t seed) {
    if (dim < 2) throw Error(ErrorKind::invalid_dimension, "dimension must be at least 2");
    PointCloud cloud;
    cloud.dim_ = dim;
    cloud.seed_ = seed;
    cloud.coords_.resize(n * static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t point_key = derive_key(seed, i);
        for (int k = 0; k < dim; ++k)
            cloud.coords_[i * dim + k] = unit_draw(point_key, static_cast<std::uint64_t>(k));
    }
    return cloud;
}

// ---------------------------------------------------------------------------
// DomainSpec

DomainSpec::DomainSpec(DomainKind kind, Point center, Point radii)
    : kind_(kind), center_(std::move(center)), radii_(std::move(radii)) {
    if (center_.size() < 2) throw Error(ErrorKind::invalid_dimension, "domain dimension must be at least 2");
    if (radii_.size() != center_.size())
        throw Error(ErrorKind::invalid_parameter, "domain radii and center differ in dimension");
    for (double e : radii_)
        if (!(e > 0.0)) throw Error(ErrorKind::invalid_parameter, "domain radii must be positive");
    if (!(cube_margin() > 0.0))
        throw Error(ErrorKind::invalid_parameter, "domain closure must lie inside the open unit cube");
}

DomainSpec DomainSpec::ball(Point center, double radius) {
    Point radii(center.size(), radius);
    return DomainSpec(DomainKind::ball, std::move(center), std::move(radii));
}

DomainSpec DomainSpec::ellipsoid(Point center, Point radii) {
    return DomainSpec(DomainKind::ellipsoid, std::move(center), std::move(radii));
}

bool DomainSpec::contains(std::span<const double> x) const {
    if (kind_ == DomainKind::ball) {
        return squared_distance(x, center_) < radii_[0] * radii_[0];
    }
    double s = 0.0;
    for (std::size_t k = 0; k < center_.size(); ++k) {
        const double t = (x[k] - center_[k]) / radii_[k];
        s += t * t;
    }
    return s < 1.0;
}

namespace {

// Closest-point problem for an axis-aligned ellipsoid centered at the origin,
// y given with nonnegative entries. Returns the distance |y - z*|.
double ellipsoid_distance(const std::vector<double>& y, const std::vector<double>& e) {
    const std::size_t d = y.size();
    auto level = [&](double t) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double q = e[k] * y[k] / (t + e[k] * e[k]);
            s += q * q;
        }
        return s;
    };
    auto distance_at = [&](double t) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double z = e[k] * e[k] * y[k] / (t + e[k] * e[k]);
            s += (y[k] - z) * (y[k] - z);
        }
        return std::sqrt(s);
    };
    auto bisect = [&](double lo, double hi) {
        // level is decreasing in t on the bracket; level(lo) > 1 > level(hi).
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (level(mid) > 1.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    double q = 0.0;
    for (std::size_t k = 0; k < d; ++k) q += (y[k] / e[k]) * (y[k] / e[k]);
    if (q == 1.0) return 0.0;

    if (q > 1.0) {
        const double emax = *std::max_element(e.begin(), e.end());
        const double ynorm = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
        return distance_at(bisect(0.0, emax * ynorm + emax * emax));
    }

    const double emin = *std::min_element(e.begin(), e.end());
    const double tmin = -emin * emin;
    bool min_axes_zero = true;
    for (std::size_t k = 0; k < d; ++k)
        if (e[k] == emin && y[k] != 0.0) min_axes_zero = false;
    if (min_axes_zero) {
        double rest = 0.0;
        std::vector<double> z(d, 0.0);
        for (std::size_t k = 0; k < d; ++k) {
            if (e[k] == emin) continue;
            z[k] = e[k] * e[k] * y[k] / (e[k] * e[k] - emin * emin);
            rest += (z[k] / e[k]) * (z[k] / e[k]);
        }
        if (rest <= 1.0) {
            for (std::size_t k = 0; k < d; ++k) {
                if (e[k] == emin) {
                    z[k] = emin * std::sqrt(1.0 - rest);
                    break;
                }
            }
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += (y[k] - z[k]) * (y[k] - z[k]);
            return std::sqrt(s);
        }
    }
    return distance_at(bisect(tmin, 0.0));
}

}  // namespace

double DomainSpec::boundary_distance(std::span<const double> x) const {
    if (kind_ == DomainKind::ball) {
        return std::sqrt(squared_distance(x, center_)) - radii_[0];
    }
    std::vector<double> y(center_.size());
    double q = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        y[k] = std::abs(x[k] - center_[k]);
        q += (y[k] / radii_[k]) * (y[k] / radii_[k]);
    }
    const double dist = ellipsoid_distance(y, radii_);
    return q < 1.0 ? -dist : dist;
}

Point DomainSpec::boundary_point(std::span<const double> angles) const {
    const std::size_t d = center_.size();
    if (angles.size() + 1 != d)
        throw Error(ErrorKind::invalid_input, "boundary_point expects dimension - 1 angles");
    Point unit(d);
    double sin_prod = 1.0;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        unit[k] = sin_prod * std::cos(angles[k]);
        sin_prod *= std::sin(angles[k]);
    }
    unit[d - 1] = sin_prod;
    Point p(d);
    for (std::size_t k = 0; k < d; ++k) p[k] = center_[k] + radii_[k] * unit[k];
    return p;
}

Point DomainSpec::outward_normal(std::span<const double> boundary_x) const {
    Point n(center_.size());
    double norm = 0.0;
    for (std::size_t k = 0; k < n.size(); ++k) {
        n[k] = (boundary_x[k] - center_[k]) / (radii_[k] * radii_[k]);
        norm += n[k] * n[k];
    }
    norm = std::sqrt(norm);
    for (double& v : n) v /= norm;
    return n;
}

double DomainSpec::ray_exit(std::span<const double> x, std::span<const double> u) const {
    double a = 0.0, b = 0.0, c = -1.0;
    for (std::size_t k = 0; k < center_.size(); ++k) {
        const double e2 = radii_[k] * radii_[k];
        const double y = x[k] - center_[k];
        a += u[k] * u[k] / e2;
        b += 2.0 * y * u[k] / e2;
        c += y * y / e2;
    }
    const double disc = std::max(0.0, b * b - 4.0 * a * c);
    return (-b + std::sqrt(disc)) / (2.0 * a);
}

double DomainSpec::cube_margin() const {
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < center_.size(); ++k)
        margin = std::min({margin, center_[k] - radii_[k], 1.0 - center_[k] - radii_[k]});
    return margin;
}

// ---------------------------------------------------------------------------
// Parameter schedules

void GraphParams::validate() const {
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::invalid_parameter, "connection radius must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::invalid_parameter, "delta must lie in (0,1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::invalid_parameter, "alpha must lie in (0,1)");
}

GraphParams schedule_params(std::size_t n, int dim, ScheduleMode mode, double explicit_r,
                            double log_exponent) {
    if (dim < 2) throw Error(ErrorKind::invalid_dimension, "dimension must be at least 2");
    if (n < 3) throw Error(ErrorKind::schedule_undefined, "parameter schedule needs n >= 3");
    const double log_n = std::log(static_cast<double>(n));
    GraphParams p;
    p.n = n;
    if (mode == ScheduleMode::paper) {
        p.r = std::pow(std::pow(log_n, log_exponent) / std::sqrt(static_cast<double>(n)),
                       1.0 / (2.0 * dim));
    } else {
        if (!(explicit_r > 0.0 && explicit_r < 1.0))
            throw Error(ErrorKind::invalid_parameter, "practical schedule needs r in (0,1)");
        p.r = explicit_r;
    }
    p.delta = p.r / std::sqrt(log_n);
    p.alpha = p.r / std::pow(log_n, 1.0 / (2.0 * (dim - 1)));
    return p;
}

}  // namespace rggenv
