#pragma once

#include <stdexcept>
#include <string>

namespace mccvc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's contract (bad argument, shape mismatch).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Input data could not be read or is unusable (parse errors, too few rows).
class DataError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed: singular systems, degenerate weights, non-finite iterates.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace mccvc
