#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bcstab {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct ConstructionError : Error { using Error::Error; };
struct ContractViolation : Error { using Error::Error; };
struct ClassificationError : Error { using Error::Error; };
struct UnsupportedMultiplicity : Error { using Error::Error; };
struct TrackingError : Error { using Error::Error; };
struct ConditioningError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct NearSpectrumError : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };

/// Iterative method failed; carries the per-iteration residual history.
struct NumericError : Error {
    NumericError(const std::string& what, std::vector<double> trace = {})
        : Error(what), trace(std::move(trace)) {}
    std::vector<double> trace;
};

}  // namespace bcstab
