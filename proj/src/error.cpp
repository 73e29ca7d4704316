#include "cqrw/error.hpp"

namespace cqrw {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnsafeQuery: return "UNSAFE_QUERY";
    case ErrorCode::EmptyBody: return "EMPTY_BODY";
    case ErrorCode::HeadInBody: return "HEAD_IN_BODY";
    case ErrorCode::ArityMismatch: return "ARITY_MISMATCH";
    case ErrorCode::UnknownRelation: return "UNKNOWN_RELATION";
    case ErrorCode::ConstantInQuery: return "CONSTANT_IN_QUERY";
    case ErrorCode::NonGroundFact: return "NON_GROUND_FACT";
    case ErrorCode::DuplicateView: return "DUPLICATE_VIEW";
    case ErrorCode::ViewNameClash: return "VIEW_NAME_CLASH";
    case ErrorCode::SyntaxError: return "SYNTAX_ERROR";
    case ErrorCode::MissingQuery: return "MISSING_QUERY";
    case ErrorCode::DuplicateQuery: return "DUPLICATE_QUERY";
    case ErrorCode::HeadArityMismatch: return "HEAD_ARITY_MISMATCH";
    case ErrorCode::SizeLimitExceeded: return "SIZE_LIMIT_EXCEEDED";
    case ErrorCode::UnknownView: return "UNKNOWN_VIEW";
    case ErrorCode::RepeatedHeadMismatch: return "REPEATED_HEAD_MISMATCH";
    case ErrorCode::NotAcyclic: return "NOT_ACYCLIC";
    case ErrorCode::NotFreeConnex: return "NOT_FREE_CONNEX";
    case ErrorCode::NotHierarchical: return "NOT_HIERARCHICAL";
    case ErrorCode::NotQHierarchical: return "NOT_Q_HIERARCHICAL";
    case ErrorCode::NotASubset: return "NOT_A_SUBSET";
    case ErrorCode::InconsistentPartition: return "INCONSISTENT_PARTITION";
    case ErrorCode::PreconditionViolated: return "PRECONDITION_VIOLATED";
    case ErrorCode::InternalError: return "INTERNAL_ERROR";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string& message)
    : Error(ErrorCode::SyntaxError,
            std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

}  // namespace cqrw
