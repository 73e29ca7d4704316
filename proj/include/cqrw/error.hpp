#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cqrw {

/// Stable error classes raised by the engine. Each maps to one failure mode
/// a caller may want to distinguish (the CLI maps them onto exit codes).
enum class ErrorCode {
  // query / view / database construction
  UnsafeQuery,
  EmptyBody,
  HeadInBody,
  ArityMismatch,
  UnknownRelation,
  ConstantInQuery,
  NonGroundFact,
  DuplicateView,
  ViewNameClash,
  // text input
  SyntaxError,
  MissingQuery,
  DuplicateQuery,
  // algorithms
  HeadArityMismatch,
  SizeLimitExceeded,
  UnknownView,
  RepeatedHeadMismatch,
  NotAcyclic,
  NotFreeConnex,
  NotHierarchical,
  NotQHierarchical,
  NotASubset,
  InconsistentPartition,
  PreconditionViolated,
  InternalError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace cqrw
