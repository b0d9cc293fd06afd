#pragma once

#include <stdexcept>
#include <string>

namespace chernforge {

// Base of every error the library throws. Callers that only need a message
// can catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class GridMismatch : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class DegreeError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// A product or evaluation would alias on the grid.
class ResolutionError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class BudgetExceeded : public Error {
public:
  using Error::Error;
};

class HarmonicObstruction : public Error {
public:
  using Error::Error;
};

class NotClosed : public Error {
public:
  using Error::Error;
};

class NotExact : public Error {
public:
  using Error::Error;
};

// Iterative solver made no sufficient progress.
class Stalled : public Error {
public:
  using Error::Error;
};

class QTooSmall : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class RegularityNotAchieved : public Error {
public:
  using Error::Error;
};

// Raised when an invariant the caller promised (e.g. membership in sp(k))
// fails on the data.
class InvalidInput : public ValidationError {
public:
  using ValidationError::ValidationError;
};

} // namespace chernforge
