#pragma once

#include <stdexcept>
#include <string>

namespace trunctail {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Estimate cannot be formed (zero denominator, too few exceedances, ...).
class DegenerateError : public Error {
public:
    using Error::Error;
};

// Truncation left no observed pair.
class EmptySampleError : public Error {
public:
    using Error::Error;
};

// Malformed user input; line is 1-based, 0 when not tied to a line.
class InputError : public Error {
public:
    InputError(std::string msg, std::size_t line = 0)
        : Error(std::move(msg)), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace trunctail
