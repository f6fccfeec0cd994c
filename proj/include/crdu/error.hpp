#pragma once

#include <stdexcept>
#include <string>

namespace crdu {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two objects that must live on the same state space do not.
class SpaceMismatch : public Error {
public:
    SpaceMismatch() : Error("space mismatch") {}
    explicit SpaceMismatch(const std::string& what) : Error("space mismatch: " + what) {}
};

/// An exhaustive operation was asked to run on a state space above its limit.
class SpaceTooLarge : public Error {
public:
    SpaceTooLarge(std::size_t size, std::size_t limit)
        : Error("space too large: " + std::to_string(size) + " states (limit " +
                std::to_string(limit) + ")") {}
};

/// An argument lies outside the domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A constructed object would violate one of its invariants. The message names
/// the constraint.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace crdu
