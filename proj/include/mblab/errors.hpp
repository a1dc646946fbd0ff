#pragma once

#include <stdexcept>
#include <string>

namespace mblab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed object: mismatched field specs, wrong vector lengths, bad transcript shape.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The requested object or search exceeds the configured size budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Feedback that no member of the version space (within the lie budget) is consistent with.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// A learner/adversary configuration violates a parameter constraint.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A descriptor string or file failed to parse.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mblab
