#include "rggenv/errors.hpp"

namespace rggenv {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_dimension: return "invalid-dimension";
        case ErrorKind::invalid_parameter: return "invalid-parameter";
        case ErrorKind::schedule_undefined: return "schedule-undefined";
        case ErrorKind::missing_annulus: return "missing-annulus";
        case ErrorKind::degenerate_experiment: return "degenerate-experiment";
        case ErrorKind::non_convergence: return "non-convergence";
        case ErrorKind::non_termination: return "non-termination";
        case ErrorKind::infeasible_oracle: return "infeasible-oracle";
        case ErrorKind::out_of_domain: return "out-of-domain";
        case ErrorKind::invalid_input: return "invalid-input";
        case ErrorKind::io: return "io";
        case ErrorKind::config: return "config";
    }
    return "unknown";
}

}  // namespace rggenv
