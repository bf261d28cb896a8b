#pragma once

#include <stdexcept>
#include <string>

namespace partialrank {

/// Input violates a documented precondition (bad ids, NaN scores, bad ranges).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file. The message carries the offending line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Refusal to run an exhaustive routine on an input that is too large.
class GuardError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// An internal invariant did not hold. Always a bug.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace partialrank
