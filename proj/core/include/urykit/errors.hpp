#pragma once

#include <stdexcept>
#include <string>

namespace urykit {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad rational literal, non-square or asymmetric matrix,
// unknown label, wrong JSON shape.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a mathematical precondition (metric
// axioms, Katetov inequalities, spec validity, weight vectors, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A postcondition the library guarantees failed to hold.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace urykit
