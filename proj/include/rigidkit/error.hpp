#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rigidkit {

enum class ErrorCode {
  SelfLoop,
  DuplicateEdge,
  Disconnected,
  VertexOutOfRange,
  EmptyGraph,
  TooLarge,
  InvalidParameters,
  EdgeNotInGraph,
  InvalidMove,
  NotTight,
  EuclideanNorm,
  InvalidNorm,
  CoincidentEndpoints,
  DimensionMismatch,
  NotSignedPermutation,
  NotWellPositioned,
  ColourSpans,
  NoWitness,
  ParameterUnderflow,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::EdgeNotInGraph: return "EdgeNotInGraph";
    case ErrorCode::InvalidMove: return "InvalidMove";
    case ErrorCode::NotTight: return "NotTight";
    case ErrorCode::EuclideanNorm: return "EuclideanNorm";
    case ErrorCode::InvalidNorm: return "InvalidNorm";
    case ErrorCode::CoincidentEndpoints: return "CoincidentEndpoints";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSignedPermutation: return "NotSignedPermutation";
    case ErrorCode::NotWellPositioned: return "NotWellPositioned";
    case ErrorCode::ColourSpans: return "ColourSpans";
    case ErrorCode::NoWitness: return "NoWitness";
    case ErrorCode::ParameterUnderflow: return "ParameterUnderflow";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rigidkit
