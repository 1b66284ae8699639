// errors.hpp: Exception types; the CLI maps these onto exit codes

#pragma once

#include <stdexcept>
#include <string>

namespace qbm {

// Invalid input: negative masses, bad grids, unsupported models. CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when 4 zeta tau / m >= 1: the rates become complex.
class UnderdampedBathError : public ValidationError {
public:
    UnderdampedBathError()
        : ValidationError("underdamped bath not supported: requires 4*zeta*tau/m < 1") {}
};

// A numerical procedure failed to reach its tolerance. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qbm
