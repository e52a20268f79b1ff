#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lcem {

enum class ErrorCode {
  // corpus-io
  MalformedHeader,
  TruncatedPayload,
  NonFiniteValue,
  DuplicateRow,
  GapInRows,
  MissingField,
  DuplicatePosition,
  LineCountMismatch,
  IndexOutOfRange,
  MalformedLink,
  RowCountMismatch,
  EmptySentence,
  Io,
  // concept-discovery
  EmptyAfterFilter,
  TooFewRows,
  MalformedConceptFile,
  // lexicon
  EmptyCorpus,
  MalformedLine,
  NonPositiveProbability,
  // metrics
  LanguageMismatch,
  LayerMismatch,
  RegimeMismatch,
  // report / cli
  UnknownConceptId,
  InvalidArgument,
  Config,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure the library reports carries one of the typed codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Wraps a failure that happened while processing a specific layer.
class LayerError : public Error {
 public:
  LayerError(int layer, const Error& cause)
      : Error(cause.code(), "layer " + std::to_string(layer) + ": " + cause.what()),
        layer_(layer) {}

  int layer() const noexcept { return layer_; }

 private:
  int layer_;
};

}  // namespace lcem
