#pragma once

#include <stdexcept>
#include <string>

namespace gradedmt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: wrong table dimensions, bad JSON shape, unknown labels.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Input is well-shaped but violates an axiom or structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class SignatureError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed the configured search budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace gradedmt
