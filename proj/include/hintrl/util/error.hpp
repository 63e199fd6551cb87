#pragma once

#include <stdexcept>
#include <string>

namespace hintrl::util {

// Bad configuration values (CLI maps these to exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// API misuse: a precondition the caller controls was violated.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hintrl::util
