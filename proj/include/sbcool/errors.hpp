#pragma once

#include <stdexcept>
#include <string>

namespace sbcool {

// Bad call or bad configuration (CLI exit code 1).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed or unreadable input files (CLI exit code 2).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// eta = 0: no steady state exists, n diverges.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Heating-dominated chain: stationary distribution is not normalizable.
struct NoStationaryStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Distribution went negative beyond tolerance; caller should reduce the step.
struct IntegratorInstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Normal matrix singular: some parameter combination is unidentifiable.
struct DegenerateFitError : std::runtime_error {
    DegenerateFitError(const std::string& msg, std::string combo)
        : std::runtime_error(msg), combination(std::move(combo)) {}
    std::string combination;
};

// Residuals evaluated to NaN/Inf at the given parameters.
struct ModelDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dataset does not span the features a routine needs.
struct CoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sbcool
