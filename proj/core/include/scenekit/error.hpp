#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scenekit {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Script text could not be turned into a Scene. Line and column are 1-based;
/// column 0 means the error concerns the whole line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// A scene violated one of its invariants where a valid scene was required.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Degenerate geometry (zero-length wall, degenerate target plane, non-convex
/// polygon handed to the convex clipper).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated point-cloud file.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed key-value configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace scenekit
