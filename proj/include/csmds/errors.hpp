#pragma once

#include <stdexcept>
#include <string>

namespace csmds {

/// Bad data: malformed matrices, files, mismatched shapes. CLI exit code 3.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed binary/CSV input. Subtype of validation (exit code 3).
class format_error : public validation_error {
public:
    explicit format_error(const std::string& msg) : validation_error(msg) {}
};

/// Contradictory run configuration. CLI exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative method failed to converge. CLI exit code 4.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An internal invariant was violated (e.g. a stale cached stress value).
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace csmds
