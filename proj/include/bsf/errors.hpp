#pragma once

#include <stdexcept>

namespace bsf {

/// Linear-solver failure inside a time step, carrying step context in the
/// message. Mapped to exit code 2 by the CLI.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bsf
