#pragma once

#include <stdexcept>
#include <string>

namespace rvib {

/// Invalid input: bad parameters, malformed configuration, mismatched spaces.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed (non-convergence, norm drift, lost tracking).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rvib
