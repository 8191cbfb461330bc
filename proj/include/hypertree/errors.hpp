#pragma once

#include <stdexcept>
#include <string>

namespace hypertree {

// Base for every error raised by the library. The CLI maps subclasses onto
// process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input or a violated precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed CSV/JSON content; carries a 1-based location when known.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, long row = -1, long column = -1)
        : ValidationError(format(what, row, column)), row_(row), column_(column) {}

    long row() const noexcept { return row_; }
    long column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, long row, long column) {
        std::string out = what;
        if (row >= 0) {
            out += " (row " + std::to_string(row);
            if (column >= 0) out += ", column " + std::to_string(column);
            out += ")";
        }
        return out;
    }

    long row_;
    long column_;
};

// A size guard refused to run an exponential computation.
class GuardError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Numerical inconsistency that indicates a bug or corrupted input tables.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace hypertree
