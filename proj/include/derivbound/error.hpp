#pragma once

/**
 * @file error.hpp
 * @brief Exception types shared by every module.
 *
 * Parameter errors flag a violated precondition on an argument, domain errors
 * flag a point outside a function's domain, evaluation errors carry the
 * abscissa at which an integrand stopped being finite.
 */

#include <stdexcept>
#include <string>

namespace derivbound {

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, double abscissa)
        : std::runtime_error(what + " (at t = " + std::to_string(abscissa) + ")"),
          abscissa_(abscissa) {}

    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

/// Raised when a root search is handed an interval without a sign change.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace derivbound
