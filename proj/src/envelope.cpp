#include "rggenv/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rggenv/errors.hpp"
#include "rggenv/random.hpp"

namespace rggenv {

SmoothTestFunction quadratic_test_function(SymMatrix a, Point b, double c0) {
    const int d = a.dim;
    if (static_cast<int>(b.size()) != d)
        throw Error(ErrorKind::invalid_dimension, "quadratic coefficients differ in dimension");
    SmoothTestFunction phi;
    phi.value = [a, b, c0](std::span<const double> x) {
        double s = c0;
        for (int i = 0; i < a.dim; ++i) {
            double ax = 0.0;
            for (int j = 0; j < a.dim; ++j) ax += a(i, j) * x[j];
            s += 0.5 * ax * x[i] + b[i] * x[i];
        }
        return s;
    };
    phi.gradient = [a, b](std::span<const double> x) {
        Point g(b);
        for (int i = 0; i < a.dim; ++i)
            for (int j = 0; j < a.dim; ++j) g[i] += a(i, j) * x[j];
        return g;
    };
    phi.hessian = [a](std::span<const double>) { return a; };
    phi.hessian_bound = std::max(std::abs(lambda_min(a)), std::abs(lambda_max(a)));

    // |A x + b| is convex in x, so its maximum over the cube sits at a corner.
    double lip = 0.0;
    Point corner(d);
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        for (int k = 0; k < d; ++k) corner[k] = (mask >> k) & 1u ? 1.0 : 0.0;
        const Point g = phi.gradient(corner);
        double n2 = 0.0;
        for (double v : g) n2 += v * v;
        lip = std::max(lip, std::sqrt(n2));
    }
    phi.lipschitz_bound = lip;
    return phi;
}

SmoothTestFunction half_squared_norm(int dim) {
    return quadratic_test_function(SymMatrix::identity(dim), Point(dim, 0.0));
}

const char* to_string(EnvelopeKind kind) {
    switch (kind) {
        case EnvelopeKind::constant: return "constant";
        case EnvelopeKind::affine: return "affine";
        case EnvelopeKind::saddle: return "saddle";
    }
    return "unknown";
}

EnvelopeCase EnvelopeCase::make_constant(DomainSpec domain, double c) {
    return EnvelopeCase{EnvelopeKind::constant, std::move(domain), c, {}, 0.0};
}

EnvelopeCase EnvelopeCase::make_affine(DomainSpec domain, Point a, double b) {
    if (static_cast<int>(a.size()) != domain.dim())
        throw Error(ErrorKind::invalid_dimension, "affine slope and domain differ in dimension");
    return EnvelopeCase{EnvelopeKind::affine, std::move(domain), 0.0, std::move(a), b};
}

EnvelopeCase EnvelopeCase::make_saddle(DomainSpec domain) {
    if (domain.dim() != 2 || domain.kind() != DomainKind::ball)
        throw Error(ErrorKind::invalid_parameter, "saddle case needs a disc in dimension 2");
    return EnvelopeCase{EnvelopeKind::saddle, std::move(domain), 0.0, {}, 0.0};
}

std::string EnvelopeCase::id() const { return to_string(kind); }

double EnvelopeCase::datum_value(std::span<const double> x) const {
    switch (kind) {
        case EnvelopeKind::constant: return constant;
        case EnvelopeKind::affine: {
            double s = offset;
            for (std::size_t k = 0; k < slope.size(); ++k) s += slope[k] * x[k];
            return s;
        }
        case EnvelopeKind::saddle: {
            const double u = x[0] - domain.center()[0];
            const double v = x[1] - domain.center()[1];
            return u * u - v * v;
        }
    }
    return 0.0;
}

BoundaryDatum EnvelopeCase::datum() const {
    EnvelopeCase copy = *this;
    return BoundaryDatum{id(), [copy](std::span<const double> x) { return copy.datum_value(x); }};
}

double EnvelopeCase::boundary_oscillation() const {
    switch (kind) {
        case EnvelopeKind::constant: return 0.0;
        case EnvelopeKind::affine: {
            double s = 0.0;
            for (std::size_t k = 0; k < slope.size(); ++k)
                s += slope[k] * slope[k] * domain.radii()[k] * domain.radii()[k];
            return 2.0 * std::sqrt(s);
        }
        case EnvelopeKind::saddle: return 2.0 * domain.radii()[0] * domain.radii()[0];
    }
    return 0.0;
}

double EnvelopeCase::lipschitz_bound(double r) const {
    switch (kind) {
        case EnvelopeKind::constant: return 0.0;
        case EnvelopeKind::affine: {
            double s = 0.0;
            for (double a : slope) s += a * a;
            return std::sqrt(s);
        }
        case EnvelopeKind::saddle: return 2.0 * (domain.radii()[0] + r);
    }
    return 0.0;
}

double analytic_envelope(const EnvelopeCase& c, std::span<const double> x) {
    if (c.domain.boundary_distance(x) > 1e-12)
        throw Error(ErrorKind::out_of_domain, "evaluation point outside the closed domain");
    switch (c.kind) {
        case EnvelopeKind::constant:
        case EnvelopeKind::affine: return c.datum_value(x);
        case EnvelopeKind::saddle: {
            const double u = x[0] - c.domain.center()[0];
            const double radius = c.domain.radii()[0];
            return 2.0 * u * u - radius * radius;
        }
    }
    return 0.0;
}

double brute_envelope_oracle(const DomainSpec& domain,
                             const std::function<double(std::span<const double>)>& f_boundary,
                             std::span<const double> x, std::size_t m_samples,
                             std::uint64_t oracle_seed) {
    if (domain.dim() != 2) throw Error(ErrorKind::invalid_dimension, "envelope oracle supports d = 2 only");
    if (m_samples < 100) throw Error(ErrorKind::invalid_parameter, "envelope oracle needs at least 100 samples");
    if (!domain.contains(x)) throw Error(ErrorKind::out_of_domain, "oracle point must lie inside the domain");

    constexpr double two_pi = 2.0 * std::numbers::pi;
    constexpr double weight_floor = -1e-12;
    double best = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < m_samples; ++i) {
        const std::uint64_t key = derive_key(oracle_seed, i);
        Point p[3];
        double fp[3];
        for (int k = 0; k < 3; ++k) {
            const double theta = two_pi * unit_draw(key, static_cast<std::uint64_t>(k));
            p[k] = domain.boundary_point(std::span<const double>(&theta, 1));
            fp[k] = f_boundary(p[k]);
        }

        // Chord through x starting at the first point.
        {
            Point u{x[0] - p[0][0], x[1] - p[0][1]};
            const double len = std::hypot(u[0], u[1]);
            if (len > 0.0) {
                u[0] /= len;
                u[1] /= len;
                const double t = domain.ray_exit(x, u);
                const Point q{x[0] + t * u[0], x[1] + t * u[1]};
                const double w = t / (t + len);
                best = std::min(best, w * fp[0] + (1.0 - w) * f_boundary(q));
            }
        }

        // Barycentric weights of x in the triangle p0 p1 p2.
        const double a00 = p[0][0] - p[2][0], a01 = p[1][0] - p[2][0];
        const double a10 = p[0][1] - p[2][1], a11 = p[1][1] - p[2][1];
        const double det = a00 * a11 - a01 * a10;
        if (std::abs(det) < 1e-15) continue;
        const double b0 = x[0] - p[2][0], b1 = x[1] - p[2][1];
        double w[3];
        w[0] = (b0 * a11 - a01 * b1) / det;
        w[1] = (a00 * b1 - b0 * a10) / det;
        w[2] = 1.0 - w[0] - w[1];
        if (w[0] < weight_floor || w[1] < weight_floor || w[2] < weight_floor) continue;
        double value = 0.0;
        for (int k = 0; k < 3; ++k) value += std::max(0.0, w[k]) * fp[k];
        best = std::min(best, value);
    }
    if (!std::isfinite(best))
        throw Error(ErrorKind::infeasible_oracle, "no feasible boundary combination found");
    return best;
}

}  // namespace rggenv
