#pragma once

#include <stdexcept>
#include <string>

namespace acl {

/// Invalid argument or violated precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation would exceed one of the enumeration or series guards.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The request is well formed but not supported (e.g. characteristic 2 for quadratic characters).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed; indicates a bug, never bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void check_invariant(bool ok, const char* what) {
  if (!ok) throw InvariantError(what);
}

}  // namespace acl
