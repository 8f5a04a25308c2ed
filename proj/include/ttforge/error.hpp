#pragma once

#include <stdexcept>
#include <string>

namespace ttforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (bad JSON, unknown ids, broken maps).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An operation was called on an object that does not satisfy its hypotheses.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// No lift of the requested map exists at any admissible target vertex.
class NotLiftable : public Error {
 public:
  using Error::Error;
};

/// Raised when a step that is guaranteed to succeed for valid inputs fails.
class Inconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace ttforge
