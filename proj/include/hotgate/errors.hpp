#pragma once

#include <stdexcept>
#include <string>

namespace hotgate {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration made the coupling law singular (coincident positions).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or matrix would exceed its configured cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// An argument violated a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The objective produced a non-finite value during optimization.
class OptimizationError : public Error {
 public:
  using Error::Error;
};

/// A scenario configuration is malformed; carries the offending line when known.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, const std::string& source = "")
      : Error(format(what, line, source)), message_(what), line_(line) {}
  int line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  static std::string format(const std::string& what, int line, const std::string& source) {
    std::string where = source;
    if (line > 0) where += (source.empty() ? "line " : ":") + std::to_string(line);
    return where.empty() ? what : where + ": " + what;
  }
  std::string message_;
  int line_ = 0;
};

}  // namespace hotgate
