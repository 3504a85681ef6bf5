#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace filterlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression; `position` is the 0-based character offset.
class ParseError : public Error {
public:
    ParseError(std::string message, std::size_t position)
        : Error(message + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A set over omega x omega was used where a set over omega is required, or vice versa.
class UniverseMismatch : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A position or block index left the representable range (2^62).
class RangeError : public Error {
public:
    using Error::Error;
};

} // namespace filterlab
