#pragma once

#include <stdexcept>
#include <string>

namespace eidlab {

// Base for all library errors. Subtypes map to CLI exit codes: validation and
// parse errors are usage/config problems (exit 2), numeric errors are runtime
// failures (exit 1).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad arguments, inconsistent inputs, violated preconditions.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Malformed input files; carries a 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line = -1)
        : Error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Nonconvergence, domination violations, resolution failures.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ValidationError(what);
}

}  // namespace eidlab
