#pragma once

#include <stdexcept>
#include <string>

namespace mule {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (not valid JSON, or wrong value types).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant; indicates a bug upstream of the thrower.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mule
