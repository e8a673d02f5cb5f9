#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hybridsim {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's mathematical domain (non-positive length, etc).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Arithmetic between quantities with different dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Malformed quantity or config text. `position` is a 0-based byte offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration: missing keys, unit mismatch, unknown keys in strict mode.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical integration aborted (truncation guard, NaN).
class SimulationError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        throw DomainError(std::string(name) + " must be > 0, got " + std::to_string(v));
    }
}

inline void require_non_negative(double v, const char* name) {
    if (!(v >= 0.0)) {
        throw DomainError(std::string(name) + " must be >= 0, got " + std::to_string(v));
    }
}

} // namespace detail
} // namespace hybridsim
