#include <algorithm>
#include <cmath>
#include <numbers>

#include "rggenv/errors.hpp"
#include "rggenv/graph.hpp"

namespace rggenv {

std::vector<Point> direction_net(int dim, double spacing) {
    if (dim < 2) throw Error(ErrorKind::invalid_dimension, "dimension must be at least 2");
    if (!(spacing > 0.0)) throw Error(ErrorKind::invalid_parameter, "direction net spacing must be positive");
    const int m = std::max(1, static_cast<int>(std::ceil(2.0 / spacing)));
    std::vector<Point> net;
    std::vector<int> idx(dim - 1, 0);
    Point p(dim);
    for (int axis = 0; axis < dim; ++axis) {
        for (double sign : {-1.0, 1.0}) {
            std::fill(idx.begin(), idx.end(), 0);
            while (true) {
                bool owned = true;
                for (int k = 0, j = 0; k < dim; ++k) {
                    if (k == axis) {
                        p[k] = sign;
                        continue;
                    }
                    const int i = idx[j++];
                    p[k] = -1.0 + 2.0 * i / m;
                    // Points on a cube edge belong to the face with the lowest axis.
                    if (k < axis && (i == 0 || i == m)) owned = false;
                }
                if (owned) {
                    double norm = 0.0;
                    for (double v : p) norm += v * v;
                    norm = std::sqrt(norm);
                    Point u(p);
                    for (double& v : u) v /= norm;
                    net.push_back(std::move(u));
                }
                int j = 0;
                while (j < dim - 1 && idx[j] == m) idx[j++] = 0;
                if (j == dim - 1) break;
                ++idx[j];
            }
        }
    }
    return net;
}

double sector_volume(int dim, double r, double delta, double alpha) {
    const double beta = std::atan(alpha);
    const double inner = (1.0 - delta) * r;
    // Solid angle of a cap of half-angle beta: |S^{d-2}| * int_0^beta sin^{d-2}.
    const double sphere_area =
        2.0 * std::pow(std::numbers::pi, 0.5 * (dim - 1)) / std::tgamma(0.5 * (dim - 1));
    double integral = beta;
    if (dim > 2) {
        const int steps = 2000;
        const double h = beta / steps;
        double s = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            s += w * std::pow(std::sin(i * h), dim - 2);
        }
        integral = s * h / 3.0;
    }
    return sphere_area * integral * (std::pow(r, dim) - std::pow(inner, dim)) / dim;
}

bool sector_occupied(const PointCloud& cloud, Index x, std::span<const double> direction,
                     std::span<const Index> candidates, double r, double delta, double alpha) {
    const double inner = (1.0 - delta) * r;
    const double inner2 = inner * inner;
    const double r2 = r * r;
    const auto px = cloud.point(x);
    const int d = cloud.dim();
    for (Index z : candidates) {
        if (z == x) continue;
        const auto pz = cloud.point(z);
        double norm2 = 0.0;
        double along = 0.0;
        for (int k = 0; k < d; ++k) {
            const double v = pz[k] - px[k];
            norm2 += v * v;
            along += v * direction[k];
        }
        if (!(norm2 > inner2 && norm2 < r2) || along < 0.0) continue;
        const double perp2 = std::max(0.0, norm2 - along * along);
        if (perp2 <= alpha * alpha * along * along) return true;
    }
    return false;
}

CoverageReport coverage_report(const ProximityGraph& graph,
                               const VertexClassification& classification,
                               const AnnulusTable& table, const GraphParams& params,
                               double direction_net_spacing) {
    params.validate();
    const PointCloud& cloud = graph.cloud();
    const int d = cloud.dim();
    const auto net = direction_net(d, direction_net_spacing);

    CoverageReport report;
    report.expected_sector_count =
        static_cast<double>(cloud.size()) * sector_volume(d, params.r, params.delta, params.alpha);

    double error_sum = 0.0;
    std::size_t error_count = 0;
    std::vector<Index> annulus;
    for (Index x : classification.interior) {
        const auto moves = table.moves(x);
        if (moves.empty()) ++report.vertices_below_n0;
        annulus.clear();
        for (const auto& m : moves) annulus.push_back(m.y);
        for (const auto& u : net) {
            ++report.sectors_tested;
            if (!sector_occupied(cloud, x, u, annulus, params.r, params.delta, params.alpha))
                ++report.sectors_empty;
        }
        const auto px = cloud.point(x);
        for (const auto& m : moves) {
            const auto py = cloud.point(m.y);
            const auto pr = cloud.point(m.reflected);
            double s = 0.0;
            for (int k = 0; k < d; ++k) {
                const double e = pr[k] + py[k] - 2.0 * px[k];
                s += e * e;
            }
            const double err = std::sqrt(s) / params.r;
            report.max_reflection_error = std::max(report.max_reflection_error, err);
            error_sum += err;
            ++error_count;
        }
    }
    if (error_count > 0) report.mean_reflection_error = error_sum / static_cast<double>(error_count);
    return report;
}

}  // namespace rggenv
