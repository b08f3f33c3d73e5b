#pragma once

#include <stdexcept>
#include <string>

namespace vfl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: unknown ids, schema violations, range
/// errors on parameters.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Input is well formed but a technique cannot run on it (for example a
/// failed test without a failure point when slicing is requested).
class PreconditionError : public Error {
public:
  using Error::Error;
};

} // namespace vfl
