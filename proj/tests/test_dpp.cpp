#include <algorithm>
#include <cmath>
#include <limits>

#include <doctest.h>

#include "fixtures.hpp"
#include "rggenv/errors.hpp"
#include "rggenv/random.hpp"

using namespace rggenv;

namespace {

std::unique_ptr<fixtures::Setup> sampled(std::size_t n, double r, std::uint64_t seed) {
    const auto p = schedule_params(n, 2, ScheduleMode::practical, r);
    return fixtures::make_setup(sample_points(2, n, seed), p.r, fixtures::unit_disc(), p.delta);
}

BoundaryDatum smooth_datum(std::uint64_t key) {
    const double a = 2.0 * unit_draw(key, 0) - 1.0, b = 2.0 * unit_draw(key, 1) - 1.0;
    const double c = 4.0 * unit_draw(key, 2) - 2.0, w = 3.0 + 6.0 * unit_draw(key, 3);
    return {"smooth", [=](std::span<const double> x) { return a * x[0] + b * x[1] * x[1] + c * std::sin(w * x[0] * x[1]); }};
}

}  // namespace

TEST_SUITE("dpp") {

TEST_CASE("sweep: constant field is unchanged") {
    const auto s = sampled(2000, 0.15, 1);
    std::vector<double> v(s->cloud.size(), 0.7);
    const auto out = dpp_sweep(v, s->table, s->cls);
    CHECK(out.residual == 0.0);
    CHECK(out.values == v);
}

TEST_CASE("sweep: star fixture takes the average of the reflected pair") {
    const auto s = fixtures::star();
    const auto f = fixtures::star_datum();
    std::vector<double> v{-5.0, f(s->cloud.point(1)), f(s->cloud.point(2))};
    const auto out = dpp_sweep(v, s->table, s->cls);
    CHECK(out.values[0] == 1.0);
    CHECK(out.values[1] == 0.0);
    CHECK(out.values[2] == 2.0);
    CHECK(out.residual == 6.0);
}

TEST_CASE("sweep: monotone in the field") {
    const auto s = sampled(2000, 0.15, 2);
    const std::size_t n = s->cloud.size();
    for (std::uint64_t t = 0; t < 5; ++t) {
        std::vector<double> u(n), v(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = unit_draw(derive_key(t, 1), i) - 0.5;
            v[i] = u[i] + unit_draw(derive_key(t, 2), i);
        }
        const auto su = dpp_sweep(u, s->table, s->cls);
        const auto sv = dpp_sweep(v, s->table, s->cls);
        for (std::size_t i = 0; i < n; ++i) CHECK(su.values[i] <= sv.values[i]);
    }
}

TEST_CASE("sweep: missing annulus names the vertex") {
    const auto s = fixtures::make_setup(PointCloud::from_coordinates(2, {0.5, 0.5, 0.6, 0.5, 0.8, 0.5}), 0.25,
                                        DomainSpec::ball({0.5, 0.5}, 0.15), 0.4);
    std::vector<double> v(3, 0.0);
    try {
        dpp_sweep(v, s->table, s->cls);
        FAIL("expected missing annulus");
    } catch (const MissingAnnulusError& e) {
        CHECK(e.vertex() == 0);
    }
}

TEST_CASE("solve: constants are fixed points") {
    const auto s = sampled(2000, 0.15, 3);
    const auto u = solve_dpp(s->table, s->cls, fixtures::constant_datum(0.7));
    CHECK(u.sweeps <= 2);
    for (Index v : s->cls.component_vertices) CHECK(std::abs(u[v] - 0.7) <= 1e-12);
    for (Index v = 0; v < s->cloud.size(); ++v)
        if (!s->cls.in_component(v)) CHECK(std::isnan(u[v]));
}

TEST_CASE("solve: star fixture gives exactly 1") {
    const auto s = fixtures::star();
    const auto u = solve_dpp(s->table, s->cls, fixtures::star_datum());
    CHECK(u[0] == 1.0);
    CHECK(u.datum_id == "star");
    SolverOptions from_below;
    from_below.start = PerronStart::negative_sup_norm;
    CHECK(solve_dpp(s->table, s->cls, fixtures::star_datum(), from_below)[0] == 1.0);
}

TEST_CASE("solve: comparison on constants") {
    const auto s = sampled(2000, 0.15, 4);
    const auto u0 = solve_dpp(s->table, s->cls, fixtures::constant_datum(0.0));
    const auto u1 = solve_dpp(s->table, s->cls, fixtures::constant_datum(1.0));
    for (Index v : s->cls.component_vertices) {
        CHECK(u0[v] == 0.0);
        CHECK(u1[v] == 1.0);
    }
}

TEST_CASE("solve: degenerate experiments are rejected") {
    const auto no_interior = fixtures::make_setup(PointCloud::from_coordinates(2, {0.1, 0.1, 0.12, 0.1}), 0.1,
                                                  fixtures::unit_disc(), 0.3);
    CHECK_THROWS_AS(solve_dpp(no_interior->table, no_interior->cls, fixtures::constant_datum(0.0)), Error);
    const auto no_boundary = fixtures::make_setup(PointCloud::from_coordinates(2, {0.5, 0.5, 0.52, 0.5}), 0.1,
                                                  fixtures::unit_disc(), 0.9);
    try {
        solve_dpp(no_boundary->table, no_boundary->cls, fixtures::constant_datum(0.0));
        FAIL("expected degenerate experiment");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degenerate_experiment);
    }
}

TEST_CASE("solve: non-convergence carries the residual history") {
    const auto s = sampled(2000, 0.15, 5);
    SolverOptions opts;
    opts.max_sweeps = 3;
    try {
        solve_dpp(s->table, s->cls, smooth_datum(1), opts);
        FAIL("expected non-convergence");
    } catch (const NonConvergenceError& e) {
        CHECK(e.residual_history().size() == 3);
    }
}

TEST_CASE("solve: Perron iterates increase monotonically, exactly") {
    const auto s = sampled(2000, 0.15, 6);
    for (auto start : {PerronStart::negative_sup_norm, PerronStart::boundary_minimum}) {
        std::vector<double> prev;
        bool monotone = true;
        SolverOptions opts;
        opts.start = start;
        opts.observer = [&](std::size_t, std::span<const double> u) {
            if (!prev.empty())
                for (Index v : s->cls.interior)
                    if (u[v] < prev[v]) monotone = false;
            prev.assign(u.begin(), u.end());
        };
        solve_dpp(s->table, s->cls, smooth_datum(2), opts);
        CHECK(monotone);
    }
}

TEST_CASE("solve: iterates from the boundary maximum decrease to the same fixed point") {
    const auto s = sampled(2000, 0.15, 6);
    const auto f = smooth_datum(2);
    std::vector<double> prev;
    bool monotone = true;
    SolverOptions above;
    above.start = PerronStart::boundary_maximum;
    above.observer = [&](std::size_t, std::span<const double> u) {
        if (!prev.empty())
            for (Index v : s->cls.interior)
                if (u[v] > prev[v]) monotone = false;
        prev.assign(u.begin(), u.end());
    };
    const auto hi = solve_dpp(s->table, s->cls, f, above);
    const auto lo = solve_dpp(s->table, s->cls, f);
    CHECK(monotone);
    const double tol = 1e-9 * std::max(1.0, f.sup_norm(s->cloud, s->cls));
    for (Index v : s->cls.interior) CHECK(std::abs(hi[v] - lo[v]) <= 1e-6);
    CHECK(hi.residual <= tol);
}

TEST_CASE("solve: bounds, boundary values and fixed-point residual") {
    const auto s = sampled(3000, 0.15, 7);
    const auto f = smooth_datum(3);
    const auto u = solve_dpp(s->table, s->cls, f);
    const double tol = 1e-9 * std::max(1.0, f.sup_norm(s->cloud, s->cls));
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Index b : s->cls.boundary) {
        CHECK(u[b] == f(s->cloud.point(b)));
        lo = std::min(lo, u[b]);
        hi = std::max(hi, u[b]);
    }
    for (Index x : s->cls.interior) {
        CHECK(u[x] >= lo - tol);
        CHECK(u[x] <= hi + tol);
        CHECK(std::abs(u[x] - min_average(u.values, s->table, x)) <= tol);
    }
    CHECK(u.residual <= tol);
    CHECK(check_subsolution(u.values, s->table, s->cls, f) >= -tol);
    CHECK(check_supersolution(u.values, s->table, s->cls, f) >= -tol);
}

TEST_CASE("solve: comparison principle on random ordered pairs") {
    const auto s = sampled(2000, 0.15, 8);
    for (std::uint64_t t = 0; t < 5; ++t) {
        const auto f = smooth_datum(derive_key(50, t));
        const double bump = unit_draw(51, t);
        const BoundaryDatum g{"g", [f, bump](std::span<const double> x) {
                                  return f(x) + bump * (1.0 + std::cos(7.0 * x[0]));
                              }};
        const auto uf = solve_dpp(s->table, s->cls, f);
        const auto ug = solve_dpp(s->table, s->cls, g);
        const double tol = 1e-9 * std::max(1.0, g.sup_norm(s->cloud, s->cls));
        for (Index v : s->cls.component_vertices) CHECK(uf[v] <= ug[v] + 2 * tol);
    }
}

TEST_CASE("solve: adding a constant shifts the solution") {
    const auto s = sampled(2000, 0.15, 9);
    const auto f = smooth_datum(4);
    const BoundaryDatum g{"shift", [f](std::span<const double> x) { return f(x) + 0.25; }};
    SolverOptions opts;
    opts.tol = 1e-12;
    const auto uf = solve_dpp(s->table, s->cls, f, opts);
    const auto ug = solve_dpp(s->table, s->cls, g, opts);
    for (Index v : s->cls.component_vertices) CHECK(ug[v] - uf[v] == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("solve: Gauss-Seidel reaches the Jacobi fixed point") {
    for (std::uint64_t seed : {10u, 11u}) {
        const auto s = sampled(3000, 0.15, seed);
        const auto f = smooth_datum(seed);
        SolverOptions gs;
        gs.order = SweepOrder::gauss_seidel;
        const auto uj = solve_dpp(s->table, s->cls, f);
        const auto ug = solve_dpp(s->table, s->cls, f, gs);
        const double tol = 1e-9 * std::max(1.0, f.sup_norm(s->cloud, s->cls));
        CHECK(ug.sweeps <= uj.sweeps);
        double worst = 0.0;
        for (Index v : s->cls.interior) worst = std::max(worst, std::abs(uj[v] - ug[v]));
        // Both stop at residual <= tol; the gap to the fixed point is bounded by
        // the distance the remaining monotone iterations could still travel.
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("subsolution certificates") {
    const auto s = sampled(2000, 0.15, 12);
    const auto f = smooth_datum(5);
    std::vector<double> low(s->cloud.size(), -f.sup_norm(s->cloud, s->cls));
    for (Index b : s->cls.boundary) low[b] = f(s->cloud.point(b));
    CHECK(check_subsolution(low, s->table, s->cls, f) >= 0.0);
    CHECK(check_supersolution(low, s->table, s->cls, f) < 0.0);
}

TEST_CASE("greedy policy tie rules") {
    const auto star = fixtures::star();
    const auto u = solve_dpp(star->table, star->cls, fixtures::star_datum());
    const auto m = greedy_policy(u.values, star->table, 0);
    CHECK(m.y == 1);
    CHECK(m.reflected == 2);

    const std::vector<double> flat(star->cloud.size(), 3.0);
    CHECK(greedy_policy(flat, star->table, 0).y == 1);

    // Three annulus members around x = vertex 0; vertex 2 is strictly best.
    const auto s = fixtures::make_setup(
        PointCloud::from_coordinates(2, {0.5, 0.5, 0.375, 0.5, 0.5, 0.625, 0.625, 0.5}), 0.2,
        DomainSpec::ball({0.5, 0.5}, 0.05), 0.6);
    REQUIRE(s->table.moves(0).size() == 3);
    std::vector<double> v{0.0, 1.0, -1.0, 1.0};
    CHECK(greedy_policy(v, s->table, 0).y == 2);
}

}
