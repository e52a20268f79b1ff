#include "lcem/error.hpp"

namespace lcem {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DuplicateRow: return "DuplicateRow";
    case ErrorCode::GapInRows: return "GapInRows";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::DuplicatePosition: return "DuplicatePosition";
    case ErrorCode::LineCountMismatch: return "LineCountMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::MalformedLink: return "MalformedLink";
    case ErrorCode::RowCountMismatch: return "RowCountMismatch";
    case ErrorCode::EmptySentence: return "EmptySentence";
    case ErrorCode::Io: return "Io";
    case ErrorCode::EmptyAfterFilter: return "EmptyAfterFilter";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::MalformedConceptFile: return "MalformedConceptFile";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::NonPositiveProbability: return "NonPositiveProbability";
    case ErrorCode::LanguageMismatch: return "LanguageMismatch";
    case ErrorCode::LayerMismatch: return "LayerMismatch";
    case ErrorCode::RegimeMismatch: return "RegimeMismatch";
    case ErrorCode::UnknownConceptId: return "UnknownConceptId";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace lcem
