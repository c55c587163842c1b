#pragma once

#include <stdexcept>
#include <string>

namespace gldp {

// Invalid inputs: bad file contents, mismatched shapes, values out of range.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A size guard refused the computation (exponential blow-up protection).
class guard_error : public std::runtime_error {
public:
    explicit guard_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal consistency assertion failed.
class internal_error : public std::runtime_error {
public:
    explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gldp
