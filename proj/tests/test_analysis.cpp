#include <algorithm>
#include <cmath>
#include <limits>

#include <doctest.h>

#include "fixtures.hpp"
#include "rggenv/errors.hpp"
#include "rggenv/random.hpp"

using namespace rggenv;

namespace {

Index linear_nearest(const PointCloud& cloud, std::span<const Index> vertices, std::span<const double> x) {
    Index best = vertices.front();
    for (Index v : vertices) {
        const double dv = squared_distance(x, cloud.point(v)), db = squared_distance(x, cloud.point(best));
        if (dv < db || (dv == db && lexicographic_less(cloud.point(v), cloud.point(best)))) best = v;
    }
    return best;
}

auto lattice_setup(double delta) {
    return fixtures::make_setup(fixtures::dyadic_lattice(), 0.1, DomainSpec::ball({0.5, 0.5}, 0.25), delta);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("extension: vertices map to themselves") {
    const auto cloud = sample_points(2, 500, 3);
    std::vector<Index> all(500);
    for (Index i = 0; i < 500; ++i) all[i] = i;
    const NearestVertexIndex index(cloud, all);
    std::vector<double> values(500);
    for (Index i = 0; i < 500; ++i) values[i] = i * 0.5;
    for (Index i = 0; i < 500; i += 7) CHECK(extend_values(values, index, cloud.point(i)) == i * 0.5);
}

TEST_CASE("extension: equidistant vertices resolve lexicographically") {
    const auto cloud = PointCloud::from_coordinates(2, {0.6, 0.5, 0.4, 0.5, 0.5, 0.9});
    const std::vector<Index> all{0, 1, 2};
    const NearestVertexIndex index(cloud, all);
    const Point mid{0.5, 0.5};
    CHECK(index.nearest(mid) == 1);
}

TEST_CASE("extension: matches a linear scan and ignores other components") {
    const auto cloud = sample_points(2, 300, 8);
    std::vector<Index> some;
    for (Index i = 0; i < 300; i += 3) some.push_back(i);
    const NearestVertexIndex index(cloud, some);
    for (std::uint64_t t = 0; t < 200; ++t) {
        const Point x{unit_draw(derive_key(40, t), 0), unit_draw(derive_key(40, t), 1)};
        CHECK(index.nearest(x) == linear_nearest(cloud, some, x));
    }
    CHECK_THROWS_AS(NearestVertexIndex(cloud, std::vector<Index>{}), Error);
}

TEST_CASE("extension: constant on Voronoi cells") {
    const auto cloud = sample_points(2, 400, 12);
    std::vector<Index> all(400);
    for (Index i = 0; i < 400; ++i) all[i] = i;
    const NearestVertexIndex index(cloud, all);
    for (std::uint64_t t = 0; t < 50; ++t) {
        const Point x{unit_draw(derive_key(41, t), 0), unit_draw(derive_key(41, t), 1)};
        std::vector<double> d;
        for (Index i = 0; i < 400; ++i) d.push_back(std::sqrt(squared_distance(x, cloud.point(i))));
        std::vector<double> sorted = d;
        std::partial_sort(sorted.begin(), sorted.begin() + 2, sorted.end());
        const double gap = sorted[1] - sorted[0];
        const Index owner = index.nearest(x);
        for (std::uint64_t k = 0; k < 5; ++k) {
            const double angle = 6.283185307179586 * unit_draw(derive_key(42, t), k);
            const double step = 0.49 * gap * unit_draw(derive_key(43, t), k);
            const Point y{x[0] + step * std::cos(angle), x[1] + step * std::sin(angle)};
            CHECK(index.nearest(y) == owner);
        }
    }
}

TEST_CASE("evaluation grid respects the margin") {
    const auto disc = fixtures::unit_disc();
    const auto pts = evaluation_points(disc, 50, 0.04);
    CHECK(!pts.empty());
    for (const auto& p : pts) CHECK(disc.boundary_distance(p) <= -0.04);
    CHECK(evaluation_points(disc, 50, 0.31).empty());
}

TEST_CASE("sup_error: exact values and constants") {
    const auto s = fixtures::make_setup(sample_points(2, 3000, 2), 0.15, fixtures::unit_disc(), 0.05);
    const auto saddle = EnvelopeCase::make_saddle(fixtures::unit_disc());
    std::vector<double> exact(s->cloud.size());
    for (Index i = 0; i < s->cloud.size(); ++i) {
        const auto p = s->cloud.point(i);
        exact[i] = 2.0 * (p[0] - 0.5) * (p[0] - 0.5) - 0.09;
    }
    const NearestVertexIndex index(s->cloud, s->cls.component_vertices);
    const auto ident = sup_error(
        exact, index, fixtures::unit_disc(),
        [&](std::span<const double> x) { return exact[index.nearest(x)]; }, EvalGrid{}, 0.15);
    CHECK(ident.sup == 0.0);
    CHECK(ident.mean == 0.0);

    const auto c = EnvelopeCase::make_constant(fixtures::unit_disc(), 0.7);
    const auto u = solve_dpp(s->table, s->cls, c.datum());
    const auto e = sup_error(u.values, index, c, EvalGrid{}, 0.15);
    CHECK(e.sup <= 1e-9);
    CHECK(e.sup >= e.mean);

    CHECK_THROWS_AS(sup_error(u.values, index, c, EvalGrid{10, 0.5}, 0.15), Error);
    (void)saddle;
}

TEST_CASE("sup_error: analytic reference agrees with the oracle") {
    const auto s = fixtures::make_setup(sample_points(2, 3000, 3), 0.15, fixtures::unit_disc(), 0.05);
    const auto saddle = EnvelopeCase::make_saddle(fixtures::unit_disc());
    const auto u = solve_dpp(s->table, s->cls, saddle.datum());
    const NearestVertexIndex index(s->cloud, s->cls.component_vertices);
    const EvalGrid grid{20, std::nullopt};
    const auto analytic = sup_error(u.values, index, saddle, grid, 0.15);
    const auto f = [&](std::span<const double> p) { return saddle.datum_value(p); };
    const auto oracle = sup_error(
        u.values, index, saddle.domain,
        [&](std::span<const double> x) { return brute_envelope_oracle(saddle.domain, f, x, 10000, 7); }, grid, 0.15);
    CHECK(std::abs(analytic.sup - oracle.sup) <= 1e-3);
    CHECK(std::abs(analytic.mean - oracle.mean) <= 1e-3);
}

TEST_CASE("discrete operator on exact reflections") {
    const auto s = lattice_setup(0.1);
    const double r = 0.1, delta = 0.1;
    const auto constant = quadratic_test_function(SymMatrix(2), {0.0, 0.0}, 0.7);
    const auto affine = quadratic_test_function(SymMatrix(2), {0.5, -1.25}, 0.25);
    const auto half = half_squared_norm(2);
    for (Index x : s->cls.interior) {
        CHECK(discrete_operator(s->table, constant, x) == 0.0);
        CHECK(discrete_operator(s->table, affine, x) == 0.0);
        double min_d2 = std::numeric_limits<double>::infinity();
        for (const auto& m : s->table.moves(x))
            min_d2 = std::min(min_d2, squared_distance(s->cloud.point(x), s->cloud.point(m.y)));
        const double op = discrete_operator(s->table, half, x);
        CHECK(op == doctest::Approx(0.5 * min_d2).epsilon(1e-12));
        CHECK(op > 0.5 * (1 - delta) * (1 - delta) * r * r);
        CHECK(op <= 0.5 * r * r + 1e-15);
    }
}

TEST_CASE("consistency report on exact reflections") {
    const auto s = lattice_setup(0.1);
    const auto constant = quadratic_test_function(SymMatrix(2), {0.0, 0.0}, 1.0);
    CHECK(consistency_report(s->table, s->cls, constant).max_normalized_residual == 0.0);
    const auto rep = consistency_report(s->table, s->cls, half_squared_norm(2));
    CHECK(rep.max_normalized_residual <= 0.1 * (2 - 0.1) / 2);
    CHECK(rep.bound_violations == 0);
    CHECK(rep.residuals.size() == s->cls.interior.size());
}

TEST_CASE("consistency bound holds on a sampled graph") {
    const auto p = schedule_params(20000, 2, ScheduleMode::practical, 0.08);
    const auto s = fixtures::make_setup(sample_points(2, 20000, 1), p.r, fixtures::unit_disc(), p.delta);
    const auto rep = consistency_report(s->table, s->cls, half_squared_norm(2));
    CHECK(rep.bound_violations == 0);
    for (std::size_t i = 0; i < rep.residuals.size(); ++i) CHECK(rep.residuals[i] <= rep.bounds[i]);
}

TEST_CASE("barrier on exact reflections") {
    const auto s = lattice_setup(0.3);
    const auto disc = DomainSpec::ball({0.5, 0.5}, 0.25);
    const Point y0{0.75, 0.5};
    // Datum equal to the affine part of the barrier, so v <= f wherever |x - y0| <= 1.
    const double slope = 2.0;
    const BoundaryDatum f{"affine", [slope](std::span<const double> x) { return slope * (x[0] - 0.75); }};
    for (double eta : {0.1, 0.5, 2.0}) {
        const auto b = make_barrier(disc, y0, slope, eta, 0.0);
        const auto rep = barrier_residual(s->table, s->cls, b, f);
        double min_d2 = std::numeric_limits<double>::infinity();
        for (Index x : s->cls.interior)
            for (const auto& m : s->table.moves(x))
                min_d2 = std::min(min_d2, squared_distance(s->cloud.point(x), s->cloud.point(m.y)));
        CHECK(rep.min_residual == doctest::Approx(0.5 * eta * min_d2).epsilon(1e-9));
        CHECK(rep.min_residual > 0.5 * eta * 0.7 * 0.7 * 0.01 - 1e-15);
        CHECK(rep.precondition_ok);
        CHECK(rep.max_excess <= 0.0);
    }
}

TEST_CASE("barrier slope formula") {
    const auto e = DomainSpec::ellipsoid({0.5, 0.5}, {0.3, 0.2});
    CHECK(barrier_slope(e, 2.0, 0.5) == doctest::Approx(0.45 * (8.0 + 0.5)));
}

TEST_CASE("barrier precondition violation is reported") {
    const auto s = lattice_setup(0.3);
    const auto disc = DomainSpec::ball({0.5, 0.5}, 0.25);
    const Point y0{0.75, 0.5};
    const BoundaryDatum f{"affine", [](std::span<const double> x) { return 5.0 * (x[0] - 0.75); }};
    const auto b = make_barrier(disc, y0, 0.0, 0.5, 0.0);
    const auto rep = barrier_residual(s->table, s->cls, b, f);
    CHECK_FALSE(rep.precondition_ok);
    REQUIRE(rep.offending_vertex.has_value());
    CHECK(b(s->cloud.point(*rep.offending_vertex)) > f(s->cloud.point(*rep.offending_vertex)));
    CHECK(rep.max_excess > 0.0);
    const Point inside{0.5, 0.5};
    CHECK_THROWS_AS(make_barrier(disc, inside, 1.0, 0.5, 0.0), Error);
}

}
