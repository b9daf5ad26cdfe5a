#pragma once

#include <stdexcept>
#include <string>

namespace wvenrich {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file or record could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Vectors or models of incompatible dimension were combined.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace wvenrich
