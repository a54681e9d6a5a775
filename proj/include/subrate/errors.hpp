#pragma once

#include <stdexcept>
#include <string>

namespace subrate {

// Adaptive quadrature failed to reach the requested tolerance.
struct IntegrationError : std::runtime_error {
    explicit IntegrationError(const std::string& msg) : std::runtime_error(msg) {}
};

// An improper integral was detected to diverge; the message names the offending tail.
struct DivergenceError : IntegrationError {
    explicit DivergenceError(const std::string& msg) : IntegrationError(msg) {}
};

// A rule that must be monotone on the sampled grid fails to be.
struct MonotonicityError : std::invalid_argument {
    explicit MonotonicityError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Least-squares fit is degenerate or its inputs are unusable.
struct FitError : std::runtime_error {
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace subrate
