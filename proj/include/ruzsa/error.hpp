#pragma once

#include <stdexcept>
#include <string>

namespace ruzsa {

/// A caller violated an operation's precondition (bad modulus, non-unit
/// dilation, out-of-range parameters).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed textual or JSON input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable, corrupt, or incompatible search checkpoint.
class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ruzsa
