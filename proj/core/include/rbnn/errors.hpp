#pragma once

#include <stdexcept>
#include <string>

namespace rbnn {

// Base class for all library errors. Contract violations that a caller can
// trigger with bad data (rather than programming mistakes) throw one of the
// subclasses below; the CLI maps them to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched vector/matrix dimensions between related arguments.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (CSV schema, labels, ranges).
class DataError : public Error {
 public:
  using Error::Error;
};

// Unreadable, malformed, or version-incompatible checkpoint files.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbnn
