#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rggenv {

enum class ErrorKind {
    invalid_dimension,
    invalid_parameter,
    schedule_undefined,
    missing_annulus,
    degenerate_experiment,
    non_convergence,
    non_termination,
    infeasible_oracle,
    out_of_domain,
    invalid_input,
    io,
    config,
};

const char* to_string(ErrorKind kind);

/// Base class for every error raised by the library. The kind lets callers
/// (the CLI in particular) map failures to exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class MissingAnnulusError : public Error {
public:
    explicit MissingAnnulusError(std::uint32_t vertex)
        : Error(ErrorKind::missing_annulus,
                "empty annulus neighborhood at vertex " + std::to_string(vertex)),
          vertex_(vertex) {}

    std::uint32_t vertex() const noexcept { return vertex_; }

private:
    std::uint32_t vertex_;
};

class NonConvergenceError : public Error {
public:
    explicit NonConvergenceError(std::vector<double> residual_history)
        : Error(ErrorKind::non_convergence,
                "value iteration did not reach tolerance after " +
                    std::to_string(residual_history.size()) + " sweeps (last residual " +
                    (residual_history.empty() ? std::string("n/a")
                                              : std::to_string(residual_history.back())) +
                    ")"),
          history_(std::move(residual_history)) {}

    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

class NonTerminationError : public Error {
public:
    NonTerminationError(std::uint64_t episode, std::uint32_t start, std::size_t step_cap)
        : Error(ErrorKind::non_termination,
                "episode " + std::to_string(episode) + " from vertex " + std::to_string(start) +
                    " did not reach the boundary within " + std::to_string(step_cap) + " steps"),
          episode_(episode) {}

    std::uint64_t episode() const noexcept { return episode_; }

private:
    std::uint64_t episode_;
};

}  // namespace rggenv
