#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace laakso {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed user input (sequence text, option values, preconditions).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Request outside the domain of the sequence, e.g. a level past an
/// explicit prefix or a dimension that needs a limit ratio.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Series evaluated at or left of its abscissa of convergence.
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Iterative method failed to reach the requested tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Evaluation too close to a pole. Carries the pole location.
class PoleError : public NumericalError {
public:
    PoleError(const std::string& what, std::complex<double> pole)
        : NumericalError(what), pole_(pole) {}

    std::complex<double> pole() const noexcept { return pole_; }

private:
    std::complex<double> pole_;
};

}  // namespace laakso
