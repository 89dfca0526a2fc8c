#pragma once

#include <stdexcept>
#include <string>

namespace circqft {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller handed in something that violates an operation's precondition
/// (non-Hermitian matrix, nonpositive time scale, size mismatch, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to deliver the promised accuracy.
class NumericalError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Propagation lost unitarity or produced non-finite entries.
class IntegrationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Phased-DFT factorization could not pick a unique column assignment.
class AmbiguityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The physical setup does not satisfy a structural requirement.
class PhysicsError : public Error {
public:
    using Error::Error;
};

/// Two eigenvalues (or diagonal energies) fall inside one cluster.
/// `time()` is NaN when the degeneracy is not tied to a point in time.
class DegeneracyError : public PhysicsError {
public:
    DegeneracyError(const std::string& what, double time);
    explicit DegeneracyError(const std::string& what);

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Ring Hamiltonian cannot be brought to circulant form by a diagonal phase change.
class GaugeError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

}  // namespace circqft
