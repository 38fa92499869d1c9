#pragma once

#include <stdexcept>
#include <string>

namespace vng {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes disagree (vector lengths, state counts, node counts).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the domain of an operation
/// (negative coordinates, off-simplex portfolio, bad probabilities).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Structured input could not be parsed or does not match the schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to reach its stated accuracy.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace vng
