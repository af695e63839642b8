#pragma once

#include <stdexcept>
#include <string>

namespace nilcoh {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mixing values from different coefficient fields (Q vs Q(t)).
struct FieldError : Error {
    using Error::Error;
};

// Division by zero, pole evaluation, and similar arithmetic violations.
struct ArithmeticError : Error {
    using Error::Error;
};

// Syntax error in a textual input, with 1-based position information.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : Error("parse error at line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ": " + msg),
          line(line_),
          column(column_) {}
};

// Structural violation in mathematical data (Jacobi failure, bad manifest, ...).
struct DataError : Error {
    using Error::Error;
};

}  // namespace nilcoh
