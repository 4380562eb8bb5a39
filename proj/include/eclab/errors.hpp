#pragma once

#include <stdexcept>
#include <string>

namespace eclab {

/// Input outside the domain of an operation (n = 0, empty string, length mismatch, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed, truncated or non-canonical bit stream.
class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Request exceeds a configured exhaustive-enumeration bound (n > n_max).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace eclab
