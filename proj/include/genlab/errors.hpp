#pragma once

#include <stdexcept>
#include <string>

namespace genlab {

// Validation and numeric failure modes surfaced by the library. CLI maps
// these to exit code 2 (bad input) except IoError, which maps to 3.

struct InvalidMatrix : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotPSD : std::invalid_argument {
    explicit NotPSD(double offending_eigenvalue)
        : std::invalid_argument("matrix is not positive semidefinite (eigenvalue " +
                                std::to_string(offending_eigenvalue) + ")"),
          eigenvalue(offending_eigenvalue) {}
    double eigenvalue;
};

struct InvalidNoise : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularModel : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidPrior : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateData : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace genlab
