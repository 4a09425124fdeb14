#pragma once

#include <stdexcept>
#include <string>

namespace desitter {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Argument sits on (or past) a singularity of the function being evaluated.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

// Point lies outside the support of a kernel or field.
class SupportError : public DomainError {
public:
    using DomainError::DomainError;
};

// An evaluation route was asked for outside the regime it is valid in.
class OutOfRegimeError : public DomainError {
public:
    using DomainError::DomainError;
};

class UnsupportedDimension : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Invalid numerical setup (grids, CFL numbers, tolerances).
class SetupError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// User-facing parameter validation failure (CLI, configs).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Sampled field does not cover the support it claims.
class CoverageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature (or another iterative method) did not reach its tolerance.
// Carries the best estimate obtained so far.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_(best_estimate), err_(error_estimate) {}

    [[nodiscard]] double best_estimate() const noexcept { return best_; }
    [[nodiscard]] double error_estimate() const noexcept { return err_; }

private:
    double best_;
    double err_;
};

}  // namespace desitter
