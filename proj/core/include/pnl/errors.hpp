#ifndef PNL_ERRORS_HPP
#define PNL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pnl {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A query fell outside the domain of a tabulated function or density.
class RangeError : public Error {
 public:
  using Error::Error;
};

// An operation was called on an object in an unsuitable state
// (for example sampling from an unnormalized density).
class StateError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters at object construction.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation was violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An input value lies outside the domain of a map.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Input data carries no usable signal (constant columns, NaNs).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Too few samples for the requested operation.
class SampleSizeError : public Error {
 public:
  using Error::Error;
};

// A hard limit (problem size, iteration cap) was exceeded.
class CapError : public Error {
 public:
  using Error::Error;
};

// An integrated quantity hit a singular value; carries the location.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double where)
      : Error(what), location(where) {}
  double location;
};

// An integration diverged (non-finite state); carries the location.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double where)
      : Error(what), location(where) {}
  double location;
};

}  // namespace pnl

#endif  // PNL_ERRORS_HPP
