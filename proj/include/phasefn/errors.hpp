#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phasefn {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments or mismatched inputs.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Function evaluated outside its domain (t outside [a,b], q <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Grid too narrow or too coarse for the requested problem.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// exp overflow guard (||f||_inf >= 700).
class MagnitudeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FitError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StiffnessError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Fixed-point iteration failed to converge; carries the increment history.
class IterationError : public NumericalError {
public:
    IterationError(const std::string& what, std::vector<double> deltas)
        : NumericalError(what), deltas_(std::move(deltas)) {}
    const std::vector<double>& deltas() const noexcept { return deltas_; }

private:
    std::vector<double> deltas_;
};

}  // namespace phasefn
