#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rggenv/dpp.hpp"

namespace rggenv {

/// One trajectory of the one-player game. positions[tau] is the first boundary
/// vertex reached.
struct Episode {
    std::vector<Index> positions;
    std::size_t tau = 0;
    double payoff = 0.0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(N)
    std::size_t episodes = 0;
    std::size_t tau_max = 0;
    double tau_mean = 0.0;
};

/// Markov strategy: picks an annulus member of the current interior vertex.
using Strategy = std::function<Index(Index)>;

/// Step cap ceil(factor * d / r^2).
std::size_t default_step_cap(int dim, double r, double factor = 50.0);

/// At each step the player proposes y, then a fair coin moves the token to y
/// or to its quasi-reflection y_x. Stops on entering the boundary set.
Episode simulate_episode(const AnnulusTable& table, const VertexClassification& classification,
                         const BoundaryDatum& f, const Strategy& strategy, Index x0,
                         std::uint64_t episode_seed, std::size_t max_steps);

/// Strategy playing greedy_policy against a fixed value field.
Strategy greedy_strategy(std::span<const double> values, const AnnulusTable& table);

/// Seed of episode k within a run keyed by `seed`.
std::uint64_t episode_seed(std::uint64_t seed, std::uint64_t k);

/// Mean payoff of N greedy episodes from x0.
McEstimate monte_carlo_value(const AnnulusTable& table, const VertexClassification& classification,
                             const BoundaryDatum& f, std::span<const double> values, Index x0,
                             std::size_t episodes, std::uint64_t seed, std::size_t max_steps);

}  // namespace rggenv
