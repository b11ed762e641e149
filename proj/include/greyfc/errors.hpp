#pragma once

#include <stdexcept>
#include <string>

namespace greyfc {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Bad input data: unreadable files, malformed rows, non-positive or
/// too-short series. Maps to process exit code 1.
class DataError : public Error {
public:
    using Error::Error;
};

/// Bad configuration: out-of-range parameters, inconsistent flags,
/// malformed environment overrides. Maps to process exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: singular systems, infeasible responses, empty
/// search spaces, degenerate metrics. Maps to process exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace greyfc
