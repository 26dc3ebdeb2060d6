#pragma once

#include <stdexcept>
#include <string>

namespace kacroots {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A scan window would evaluate the raw polynomial where t^j overflows.
/// Callers should scan reverse(p) on the reciprocal window instead.
class OverflowPolicyError : public Error {
 public:
  using Error::Error;
};

class DegreeTooLarge : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class InsufficientStatistics : public Error {
 public:
  using Error::Error;
};

}  // namespace kacroots
