#pragma once

#include <stdexcept>
#include <string>

namespace cudseq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments, unparsable input, violated preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

// A source ran dry before the requested number of windows was examined.
class ShortStreamError : public InputError {
 public:
  using InputError::InputError;
};

// A size or index does not fit the 128-bit arithmetic, or an exhaustive
// routine was asked for more work than its guard allows.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A growth function broke monotonicity or positivity.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cudseq
