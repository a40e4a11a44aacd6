#pragma once

#include <stdexcept>
#include <string>

namespace geopth {

/// Invalid data passed to an operation (dimension mismatch, empty input, ...).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid parameter combination (e.g. codebook size larger than the database).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed, truncated or version-mismatched artifact files.
class PersistenceError : public std::runtime_error {
public:
    explicit PersistenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Failure of an evaluation run (e.g. every query skipped).
class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Broken internal invariant; indicates a bug or corrupted artifact.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace geopth
