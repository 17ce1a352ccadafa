#pragma once

#include <stdexcept>
#include <string>

namespace roughex {

// Invalid parameters or arguments.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Operation called for a moment in the wrong case (A/B/C/D).
class CaseError : public DomainError {
public:
    using DomainError::DomainError;
};

// Maturity outside the range where a critical moment can be computed.
class RangeError : public DomainError {
public:
    RangeError(const std::string& what, double lo, double hi)
        : DomainError(what), lo_(lo), hi_(hi) {}

    double valid_lo() const noexcept { return lo_; }
    double valid_hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

// Evaluation at or past the explosion time.
class ExplosionError : public DomainError {
public:
    using DomainError::DomainError;
};

// Solver failure: non-convergence, overflow, inconsistent bounds.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace roughex
