#pragma once

#include <stdexcept>
#include <string>

namespace cpulse {

/// Base of every exception the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-side contract was violated (bad axis, empty sequence, bad grid window...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Numerical procedure could not produce a result (degenerate formula, failed solver).
class NumericError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cpulse
