#pragma once

#include <stdexcept>
#include <string>

namespace aaechat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: a record, file, or model output that cannot be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A value or call that violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Failure reading or writing a file.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace aaechat
