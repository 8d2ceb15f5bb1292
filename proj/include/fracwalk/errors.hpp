#pragma once

#include <stdexcept>
#include <string>

namespace fracwalk {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the admissible range of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The result would exceed the representable range of a double.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A series could not reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class InversionError : public Error {
 public:
  using Error::Error;
};

/// A simulation exceeded its event budget (heavy tails can explode counts).
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A query lies outside the observed window of a path.
class RangeError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace fracwalk
