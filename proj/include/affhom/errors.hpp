#pragma once

#include <stdexcept>
#include <string>

namespace affhom {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An operation was called outside its documented domain.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A term of a series is not divisible by the requested monomial.
class NotDivisibleError : public Error {
public:
    NotDivisibleError(const std::string& message, std::string witness)
        : Error(message), witness_(std::move(witness)) {}
    const std::string& witness() const noexcept { return witness_; }

private:
    std::string witness_;
};

// An equation cannot be solved for the requested unknown.
class SolveError : public Error {
public:
    using Error::Error;
};

// Constraints contradict each other or the nonzero assumptions.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

// Malformed text input (series files, scripts, catalogs, expressions).
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace affhom
