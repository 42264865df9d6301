#pragma once

#include <stdexcept>
#include <string>

namespace nse {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Array length does not match the pixelization or band it is paired with.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// A numerical contract was violated (e.g. a malformed Alm produced a
/// complex-valued field).
class ConventionViolation : public Error {
 public:
  using Error::Error;
};

/// The kept set of a scale is empty; no estimate can be formed.
class AllMaskedError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nse
