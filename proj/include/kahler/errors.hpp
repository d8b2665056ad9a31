#pragma once

#include <stdexcept>
#include <string>

namespace kahler {

// Shape or dimension mismatch between arguments.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An argument violates an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A tensor fails the Kahler symmetries badly enough to poison a result.
class SymmetryViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent tensor file.
class TensorFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal consistency check failed; indicates a bug, not bad input.
class InternalAssertionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kahler
