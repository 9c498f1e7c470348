#pragma once

#include <stdexcept>
#include <string>

namespace vlp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument lies outside the declared domain of an object.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Averaging or harmonic mean over a null set.
class DegenerateSetError : public Error {
 public:
  using Error::Error;
};

// An explicit construction could not be completed.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Malformed exponent spec, CSV or CLI input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace vlp
