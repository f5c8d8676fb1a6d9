#ifndef CLOPEN_ERRORS_HPP
#define CLOPEN_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clopen {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured bound (rank, node budget, search budget) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A value violates the invariants of its type (malformed CNF, edge outside
// carrier, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Unknown predicate symbol, arity mismatch, slice index outside the index set.
class SignatureError : public Error {
 public:
  using Error::Error;
};

// Unbound variable or out-of-domain constant in a formula instance.
class MalformedInstanceError : public Error {
 public:
  using Error::Error;
};

class NoWitnessError : public Error {
 public:
  using Error::Error;
};

class WellFoundednessError : public Error {
 public:
  using Error::Error;
};

class NotClopenError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class IncompleteStrategyError : public Error {
 public:
  using Error::Error;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

class NotWinningStrategyError : public Error {
 public:
  using Error::Error;
};

class MalformedTranscriptError : public Error {
 public:
  using Error::Error;
};

}  // namespace clopen

#endif  // CLOPEN_ERRORS_HPP
