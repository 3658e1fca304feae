#pragma once

#include <stdexcept>

namespace pa {

// Fault categories used across the library:
//   range fault        -> std::out_of_range
//   domain fault       -> std::domain_error
//   contract fault     -> std::logic_error
//   exponent overflow  -> std::range_error
//   decode fault       -> pa::decode_error

/// Thrown when a byte stream is truncated or does not describe a valid object.
class decode_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pa
