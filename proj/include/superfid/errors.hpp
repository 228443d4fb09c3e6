#pragma once

#include <stdexcept>
#include <string>

namespace superfid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A matrix or eigenvalue vector violates the density-matrix / simplex invariants.
class InvalidState : public Error {
public:
    using Error::Error;
};

/// Evaluation at a point where the quantity diverges (pure states, zero eigenvalues).
class Singularity : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

/// Finite-difference step could not be shrunk enough to stay inside the PSD cone.
class StepSizeError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double partial, double error_estimate)
        : Error(what), partial_(partial), error_estimate_(error_estimate) {}
    double partial_estimate() const noexcept { return partial_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double partial_;
    double error_estimate_;
};

/// The randomized search found a density ratio above the claimed supremum.
class EnvelopeAuditFailure : public Error {
public:
    using Error::Error;
};

class UnvalidatedMomentSource : public Error {
public:
    using Error::Error;
};

class GofError : public Error {
public:
    using Error::Error;
};

}  // namespace superfid
