#pragma once

#include <stdexcept>
#include <string>

namespace textlier {

/// Coarse failure categories; the CLI maps these onto process exit codes.
enum class ErrorKind { argument, shape, state, format, io, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(ErrorKind::argument, what) {}
};

/// A class has fewer members than there are non-empty partitions.
class StratificationError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorKind::shape, what) {}
};

class StateError : public Error {
 public:
  explicit StateError(const std::string& what) : Error(ErrorKind::state, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ErrorKind::format, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// Raised when an optimizer sees a non-finite loss or gradient.
class TrainingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace textlier
