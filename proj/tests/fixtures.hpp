#pragma once

#include <memory>
#include <vector>

#include "rggenv/analysis.hpp"
#include "rggenv/dpp.hpp"
#include "rggenv/graph.hpp"

namespace fixtures {

using namespace rggenv;

// Cloud, graph, classification and annulus table kept together; the members
// reference each other, so instances live behind a unique_ptr.
struct Setup {
    PointCloud cloud;
    ProximityGraph graph;
    VertexClassification cls;
    AnnulusTable table;
};

inline std::unique_ptr<Setup> make_setup(PointCloud cloud, double r, const DomainSpec& domain, double delta) {
    auto s = std::make_unique<Setup>();
    s->cloud = std::move(cloud);
    s->graph = build_graph(s->cloud, r);
    s->cls = classify(s->graph, domain);
    s->table = AnnulusTable(s->graph, s->cls, delta);
    return s;
}

// Interior x = vertex 0 at the center of a small disc; boundary a = vertex 1
// and its exact mirror image b = vertex 2.
inline DomainSpec star_domain() { return DomainSpec::ball({0.5, 0.5}, 0.05); }

inline std::unique_ptr<Setup> star() {
    return make_setup(PointCloud::from_coordinates(2, {0.5, 0.5, 0.375, 0.5, 0.625, 0.5}), 0.25,
                      star_domain(), 0.6);
}

// f(a) = 0, f(b) = 2.
inline BoundaryDatum star_datum() {
    return {"star", [](std::span<const double> x) { return x[0] < 0.5 ? 0.0 : 2.0; }};
}

// Dyadic lattice with spacing 1/64: 2x - y is again a lattice point and is
// computed exactly, so every quasi-reflection is exact.
inline PointCloud dyadic_lattice(int per_axis = 65) {
    std::vector<double> coords;
    for (int i = 0; i < per_axis; ++i)
        for (int j = 0; j < per_axis; ++j) {
            coords.push_back(i / 64.0);
            coords.push_back(j / 64.0);
        }
    return PointCloud::from_coordinates(2, std::move(coords));
}

inline DomainSpec unit_disc() { return DomainSpec::ball({0.5, 0.5}, 0.3); }

inline BoundaryDatum constant_datum(double c) {
    return {"constant", [c](std::span<const double>) { return c; }};
}

}  // namespace fixtures
