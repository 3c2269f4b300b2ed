#pragma once

#include <stdexcept>
#include <string>

namespace laddr {

// Error taxonomy shared by the library and the CLI. Each class maps to a
// distinct process exit code (documented in the CLI help text).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual int exit_code() const { return 1; }
};

// Missing, unreadable, or unwritable files.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
    int exit_code() const override { return 3; }
};

// Schema mismatches, violated preconditions, malformed data.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
    int exit_code() const override { return 4; }
};

// Undefined quantities (zero denominators, empty argmin sets).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
    int exit_code() const override { return 5; }
};

} // namespace laddr
