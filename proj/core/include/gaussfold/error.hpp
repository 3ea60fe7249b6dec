#pragma once

#include <stdexcept>
#include <string>

namespace gaussfold {

/// Error identifiers carried by every gaussfold::Error. Validation errors
/// come from malformed input or configuration; pipeline errors come from an
/// operation whose precondition fails on otherwise well-formed data.
enum class ErrorCode {
  // validation
  ParseError,
  InvariantViolation,
  DimensionMismatch,
  NonpositiveDelta,
  NonpositiveAlpha,
  GeometryOutsideBall,
  // pipeline
  EmptyManifold,
  OutOfInjectivityRange,
  BaseMismatch,
  DiameterTooLarge,
  ConeAtOrigin,
  NonpositiveT,
  NonTransverse,
  NoSlabSamples,
  EmptyReference,
};

constexpr const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonpositiveDelta: return "NonpositiveDelta";
    case ErrorCode::NonpositiveAlpha: return "NonpositiveAlpha";
    case ErrorCode::GeometryOutsideBall: return "GeometryOutsideBall";
    case ErrorCode::EmptyManifold: return "EmptyManifold";
    case ErrorCode::OutOfInjectivityRange: return "OutOfInjectivityRange";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::DiameterTooLarge: return "DiameterTooLarge";
    case ErrorCode::ConeAtOrigin: return "ConeAtOrigin";
    case ErrorCode::NonpositiveT: return "NonpositiveT";
    case ErrorCode::NonTransverse: return "NonTransverse";
    case ErrorCode::NoSlabSamples: return "NoSlabSamples";
    case ErrorCode::EmptyReference: return "EmptyReference";
  }
  return "UnknownError";
}

/// True for errors that indicate bad user input (files, flags, config)
/// rather than a failed pipeline stage. The CLI exits 2 for the former
/// and 3 for the latter.
constexpr bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvariantViolation:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonpositiveDelta:
    case ErrorCode::NonpositiveAlpha:
    case ErrorCode::GeometryOutsideBall:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  const char* name() const { return error_name(code_); }
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gaussfold
