#pragma once

#include <stdexcept>
#include <string>

namespace ssc {

// Bad user input: malformed files, out-of-range arguments, mismatched alphabets.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request exceeds an enumeration or search-volume guard.
class SizeError : public InputError {
 public:
  using InputError::InputError;
};

// A checkpoint that cannot be trusted for resuming.
class CheckpointError : public InputError {
 public:
  using InputError::InputError;
};

// An internal invariant failed. Seeing one of these means a bug, or a
// counterexample to a proven property.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ssc
