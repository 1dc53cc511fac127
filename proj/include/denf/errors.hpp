// Exception hierarchy shared across the library.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace denf {

// Malformed textual input (formula, trace, partition).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position)
      : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Atom outside the configured alphabet.
class UnknownAtomError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// encode() received a formula that is not in TDNF.
class EncodeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The specification simplifies to false; nothing can be enforced.
class SpecificationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A message arrived in a state that cannot consume it.
class ProtocolError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated internal invariant (empty TCL domain, disagreement, stalled round,
// broken bound). Always surfaced, never masked.
class InternalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Oracle-side failure (e.g. no safe candidate exists within the bounds).
class OracleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace denf
