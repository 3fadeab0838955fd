#pragma once

#include <stdexcept>
#include <string>

namespace cornerforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system or stream failure (missing file, short write).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input that is readable but does not satisfy a format or data contract.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Line-oriented parse failure; `line()` is 1-based.
class ParseError : public DataError {
 public:
  ParseError(int line, const std::string& message)
      : DataError("line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace cornerforge
