#include "rggenv/game.hpp"

#include <algorithm>
#include <cmath>

#include "rggenv/errors.hpp"
#include "rggenv/random.hpp"

namespace rggenv {

std::size_t default_step_cap(int dim, double r, double factor) {
    return static_cast<std::size_t>(std::ceil(factor * dim / (r * r)));
}

std::uint64_t episode_seed(std::uint64_t seed, std::uint64_t k) {
    return derive_key(seed ^ 0x6a09e667f3bcc909ULL, k);
}

Episode simulate_episode(const AnnulusTable& table, const VertexClassification& classification,
                         const BoundaryDatum& f, const Strategy& strategy, Index x0,
                         std::uint64_t seed, std::size_t max_steps) {
    if (max_steps < 1) throw Error(ErrorKind::invalid_parameter, "step cap must be at least 1");
    if (!classification.in_component(x0))
        throw Error(ErrorKind::invalid_parameter, "starting vertex is not in the largest component");
    const PointCloud& cloud = table.graph().cloud();

    Episode ep;
    ep.positions.push_back(x0);
    Index x = x0;
    std::size_t step = 0;
    while (!classification.is_boundary(x)) {
        if (step == max_steps) throw NonTerminationError(seed, x0, max_steps);
        const auto moves = table.moves(x);
        if (moves.empty()) throw MissingAnnulusError(x);
        const Index y = strategy(x);
        const auto it = std::find_if(moves.begin(), moves.end(),
                                     [y](const AnnulusTable::Move& m) { return m.y == y; });
        if (it == moves.end())
            throw Error(ErrorKind::invalid_input, "strategy proposed a vertex outside the annulus");
        const bool heads = (counter_word(seed, step) >> 63) != 0;
        x = heads ? it->y : it->reflected;
        ep.positions.push_back(x);
        ++step;
    }
    ep.tau = step;
    ep.payoff = f(cloud.point(x));
    return ep;
}

Strategy greedy_strategy(std::span<const double> values, const AnnulusTable& table) {
    return [values, &table](Index x) { return greedy_policy(values, table, x).y; };
}

McEstimate monte_carlo_value(const AnnulusTable& table, const VertexClassification& classification,
                             const BoundaryDatum& f, std::span<const double> values, Index x0,
                             std::size_t episodes, std::uint64_t seed, std::size_t max_steps) {
    if (episodes == 0) throw Error(ErrorKind::invalid_parameter, "episode count must be positive");
    const Strategy strategy = greedy_strategy(values, table);

    // Welford accumulation in episode order keeps the reduction deterministic.
    McEstimate est;
    est.episodes = episodes;
    double mean = 0.0, m2 = 0.0, tau_sum = 0.0;
    for (std::size_t k = 0; k < episodes; ++k) {
        Episode ep;
        try {
            ep = simulate_episode(table, classification, f, strategy, x0, episode_seed(seed, k),
                                  max_steps);
        } catch (const NonTerminationError&) {
            throw NonTerminationError(k, x0, max_steps);
        }
        const double delta = ep.payoff - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (ep.payoff - mean);
        tau_sum += static_cast<double>(ep.tau);
        est.tau_max = std::max(est.tau_max, ep.tau);
    }
    est.mean = mean;
    est.tau_mean = tau_sum / static_cast<double>(episodes);
    if (episodes > 1) {
        const double var = std::max(0.0, m2 / static_cast<double>(episodes - 1));
        est.std_error = std::sqrt(var / static_cast<double>(episodes));
    }
    return est;
}

}  // namespace rggenv
