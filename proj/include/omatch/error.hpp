#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace omatch {

enum class ErrorKind {
  ZeroNormVector,
  DimensionMismatch,
  NonFiniteInput,
  NotNormalized,
  EmptyPromptSet,
  PromptSetMismatch,
  ChannelOutOfRange,
  InvalidConfig,
  EmptyMatrix,
  NonFiniteEntry,
  EmptyVariantList,
  UnknownLabel,
  KOutOfRange,
  MissingViewDistance,
  InsufficientCrops,
  NTooLarge,
  DegenerateConcepts,
  InvalidProblem,
  ForeignCropId,
  MissingEmbedding,
  MethodConfigError,
  IoError,
  InvalidSet,
  BadMagic,
  UnsupportedVersion,
  UnsupportedDtype,
  TruncatedPayload,
  NormViolation,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures are reported through this type; kind() is the stable
// discriminator, what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace omatch
