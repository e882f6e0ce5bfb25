#pragma once

#include <stdexcept>
#include <string>

namespace blo {

// Root of every error the library throws. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedInput : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Operands whose lengths disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class IncomparableTemplates : public Error {
 public:
  using Error::Error;
};

class StorageError : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

// Corrupt on-disk data (bad magic, manifest line, truncated payload).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Request exceeds what can be enumerated exhaustively.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace blo
