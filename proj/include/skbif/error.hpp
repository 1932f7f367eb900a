#pragma once

#include <stdexcept>
#include <string>

namespace skbif {

/// Caller violated a documented precondition (bad k, p out of range, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy answer.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularJacobianError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// An eigenvalue fell inside the zero band where the sign cannot be trusted.
class NonHyperbolicError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

inline void require(bool cond, const std::string& what)
{
    if (!cond) {
        throw PreconditionError(what);
    }
}

} // namespace skbif
