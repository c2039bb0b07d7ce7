// errors.hpp: exception types shared by the pddqsl modules

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pddqsl {

// Argument outside the mathematical domain of an operation (negative ω, s <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A density matrix failed Hermiticity / trace / positivity checks.
class InvalidStateError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base for numerical failures (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive integration did not reach the requested tolerance.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double estimate, double error_estimate)
        : NumericalError(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

// Grid refinement (total variation, time averages) ran out of budget.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double estimate, double last_change)
        : NumericalError(what), estimate_(estimate), last_change_(last_change) {}

    double estimate() const noexcept { return estimate_; }
    double last_change() const noexcept { return last_change_; }

private:
    double estimate_;
    double last_change_;
};

class EigenSolverError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// X-state with rho14 = rho23 = 0: nothing dephases, the QSL time is undefined.
class NoCoherenceError : public DomainError {
public:
    using DomainError::DomainError;
};

// Q(t) == 1 on the whole window, so the total variation is zero and the QSL ratio is 0/0.
class FrozenDynamicsError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Bad scenario configuration (CLI exit code 2). line == 0 means "not from a file".
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& message, std::size_t line = 0)
        : std::runtime_error(format(field, message, line)), field_(field), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& field, const std::string& message, std::size_t line) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!field.empty()) out += field + ": ";
        return out + message;
    }

    std::string field_;
    std::size_t line_;
};

} // namespace pddqsl
