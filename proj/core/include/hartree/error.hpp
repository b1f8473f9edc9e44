#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hartree {

// Invalid parameters or inconsistent inputs (bad dimension, grid mismatch, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the domain where an operation is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The discretized model has no bound state (eigenvalue >= 0).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative solver gave up. Carries the residual history.
class NonconvergenceError : public std::runtime_error {
public:
    NonconvergenceError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), history_(std::move(history)) {}
    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

// Too few usable rows for an asymptotic fit.
class FitUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hartree
