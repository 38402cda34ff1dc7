#pragma once

#include <stdexcept>
#include <string>

namespace oifuse {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (bad rows, bad config, broken invariants).
/// Maps to CLI exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Unsatisfiable numerical precondition (zero variance, rank deficiency,
/// no common support, divergent filter configuration). Maps to CLI exit code 2.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace oifuse
