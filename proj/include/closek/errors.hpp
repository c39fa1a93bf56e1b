#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace closek {

// Error classes map one-to-one onto CLI exit codes.
enum class ErrorKind {
  Usage = 2,       // violated precondition or bad argument
  Io = 3,          // unreadable / unwritable file
  Divergence = 4,  // non-finite loss, score or parameter
  Dataset = 5,     // malformed or invalid dataset contents
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what)
      : Error(ErrorKind::Usage, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

/// Raised when training produces a non-finite loss or parameter. `epoch` is
/// 0 when the failure happened outside a training loop.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what, std::size_t epoch = 0)
      : Error(ErrorKind::Divergence, what), epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

enum class DatasetProblem {
  EmptyFile,
  MissingLabelColumn,
  DuplicateHeader,
  NonNumericFeature,
  RaggedRow,
  LabelClassCount,
  NonFiniteFeature,
  BadLabel,
  SingleClass,
  Empty,
};

class DatasetError : public Error {
 public:
  DatasetError(DatasetProblem problem, const std::string& what)
      : Error(ErrorKind::Dataset, what), problem_(problem) {}

  DatasetProblem problem() const noexcept { return problem_; }

 private:
  DatasetProblem problem_;
};

}  // namespace closek
