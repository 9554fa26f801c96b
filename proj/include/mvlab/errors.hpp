#pragma once

#include <stdexcept>
#include <string>

namespace mvlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point, radius or time lies outside the domain of a geometry or kernel.
class RangeError : public Error {
public:
    using Error::Error;
};

/// The requested combination (kernel kind, geometry, dimension, field) is not modelled.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// The ODE integrator failed before reaching the requested endpoint.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double exit_sigma)
        : Error(what), exit_sigma_(exit_sigma) {}
    double exit_sigma() const { return exit_sigma_; }

private:
    double exit_sigma_;
};

/// No initial speed in the search range sends an L-geodesic to the target.
class UnreachableError : public Error {
public:
    using Error::Error;
};

/// A level set is empty, not attained or not compact inside the domain.
class NoRegionError : public Error {
public:
    using Error::Error;
};

/// Adaptive refinement stopped before the requested accuracy.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double value, double error)
        : Error(what), value_(value), error_(error) {}
    double value() const { return value_; }
    double error() const { return error_; }

private:
    double value_;
    double error_;
};

/// Input violates an operation precondition (e.g. v < 0 for an inequality).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Bad command line or configuration.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace mvlab
