#pragma once

#include <stdexcept>
#include <string>

namespace sga {

// Evaluation outside a function's domain (log at 0, body outside the base set).
struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// Impossible configuration (insufficient fresh generators, wrong mode).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text or JSON.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sga
