#pragma once

#include <stdexcept>
#include <string>

namespace sirlyap {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class R0NotAboveOne : public Error {
 public:
  using Error::Error;
};

/// The requested construction needs a parameter regime that does not hold.
class RegimeError : public Error {
 public:
  using Error::Error;
};

class InfeasibleOverride : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the (open) domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A gradient was requested within the boundary band of a region.
class OnBoundary : public Error {
 public:
  using Error::Error;
};

class OutOfH : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class MismatchedEquilibrium : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sirlyap
