#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strata {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (compact notation, complex literals, canonical forms).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A precondition on sizes or arguments was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Requested size or form is outside the tabulated catalog.
class OutOfCatalog : public Error {
public:
    using Error::Error;
};

/// A rank or eigenvalue decision fell inside the tolerance band.
class NumericalAmbiguity : public Error {
public:
    using Error::Error;
};

/// Sylvester solve refused: the two spectra are not separated.
class SpectraOverlap : public Error {
public:
    using Error::Error;
};

/// The iterative reduction could not reach the miniversal form.
class ReductionError : public Error {
public:
    using Error::Error;
};

} // namespace strata
