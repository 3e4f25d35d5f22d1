#pragma once

#include <stdexcept>
#include <string>

namespace swarm_lssvm {

/// Bad arguments, malformed files, inconsistent shapes. CLI exit status 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Text that could not be parsed; carries the offending line or field in the message.
class ParseError : public InputError {
public:
    using InputError::InputError;
};

/// Failures of the numerical machinery itself. CLI exit status 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double condition_estimate = 0.0)
        : std::runtime_error(what), condition_estimate_(condition_estimate) {}

    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

/// Objective returned a non-finite value during an optimizer run.
class EvaluationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace swarm_lssvm
