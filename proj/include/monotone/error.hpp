#pragma once

#include <stdexcept>
#include <string>

namespace monotone {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ball, sphere, layer or window leaves the region where data exists.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

/// A nonlinearity was evaluated outside its admissible u-range.
class ModelDomainError : public Error {
 public:
  ModelDomainError(const std::string& what, int component)
      : Error(what), component_(component) {}
  int component() const noexcept { return component_; }

 private:
  int component_;
};

/// Iterative solver did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis required by an operation does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Kernel evaluated at its singular time t = t0.
class SingularTimeError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or configuration value.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or field file; carries the offending location.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace monotone
