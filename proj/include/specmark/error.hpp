#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specmark {

// Base of every error thrown by the library. kind() is a short stable tag
// used as the machine-parseable prefix in CLI error lines.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error("dimension", what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error("parse", what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset),
        detail_(what) {}

  std::size_t offset() const noexcept { return offset_; }

  /// Same error with `prefix` (typically a file name) prepended.
  ParseError with_context(const std::string& prefix) const {
    return ParseError(offset_, prefix + ": " + detail_);
  }

 private:
  std::size_t offset_;
  std::string detail_;
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error("format", what) {}
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& what) : Error("integrity", what) {}
};

class NumericalError : public Error {
 public:
  NumericalError(double residual, const std::string& what)
      : Error("numerical", what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error("parameter", what) {}
};

class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& what) : Error("degenerate", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace specmark
