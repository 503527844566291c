#pragma once

#include <stdexcept>
#include <string>

namespace fracdd {

/// Raised for invalid problem setup: bad mesh sizes, malformed configs,
/// asymmetric measures. The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a computation produces NaN or a matrix that should be SPD
/// fails to factorize. The CLI maps it to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fracdd
