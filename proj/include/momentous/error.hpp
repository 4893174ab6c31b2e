#pragma once

#include <stdexcept>
#include <string>

namespace momentous {

/// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

class NoTurningPoint : public Error {
 public:
  using Error::Error;
};

class InvalidEnergy : public Error {
 public:
  using Error::Error;
};

class RangeViolation : public Error {
 public:
  using Error::Error;
};

class InvalidOrder : public Error {
 public:
  using Error::Error;
};

class InvalidMargin : public Error {
 public:
  using Error::Error;
};

}  // namespace momentous
