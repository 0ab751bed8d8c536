#pragma once

#include <stdexcept>
#include <string>

namespace diffhmm {

/// Bad or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: singular solve, eigensolver breakdown, non-finite state
/// (CLI exit code 3).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition of an operation was violated by the caller.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested resolvent parameter lies outside the region where the inverse
/// representation is guaranteed; carries the threshold for diagnostics.
class ValidityError : public std::runtime_error {
public:
    ValidityError(const std::string& what, double threshold)
        : std::runtime_error(what), threshold(threshold) {}
    double threshold;
};

}  // namespace diffhmm
