// errors.hpp — exception types shared by all mqme modules

#pragma once

#include <stdexcept>
#include <string>

namespace mqme {

// Argument outside the mathematical domain of an operation (eta <= 0, s > t, q > n, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A quadrature or root search did not reach the requested tolerance.
struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bound needs moment mu_i for an index the MomentSequence does not cover.
struct InsufficientMomentsError : std::out_of_range {
    InsufficientMomentsError(std::size_t required, std::size_t available)
        : std::out_of_range("moment sequence too short: index " + std::to_string(required) +
                            " required, highest available index is " +
                            std::to_string(available == 0 ? 0 : available - 1)),
          required_index(required) {}
    std::size_t required_index;
};

// Dissipators are implemented for m, n in {1, 2} only.
struct UnsupportedOrderError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Adaptive step size fell below the representable minimum.
struct StiffnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fock-space truncation failed to converge below the cutoff ceiling.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed run configuration or command line.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace mqme
