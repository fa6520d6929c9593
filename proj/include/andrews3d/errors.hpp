#pragma once

#include <stdexcept>
#include <string>

namespace andrews3d {

/// Bad caller input: wrong dimensions, violated preconditions, unknown options.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file was readable but malformed (ragged rows, non-numeric cells, ...).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical invariant that is supposed to hold did not.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace andrews3d
