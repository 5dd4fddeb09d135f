#include "omatch/error.hpp"

namespace omatch {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroNormVector: return "ZeroNormVector";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::EmptyPromptSet: return "EmptyPromptSet";
    case ErrorKind::PromptSetMismatch: return "PromptSetMismatch";
    case ErrorKind::ChannelOutOfRange: return "ChannelOutOfRange";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::EmptyMatrix: return "EmptyMatrix";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::EmptyVariantList: return "EmptyVariantList";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::KOutOfRange: return "KOutOfRange";
    case ErrorKind::MissingViewDistance: return "MissingViewDistance";
    case ErrorKind::InsufficientCrops: return "InsufficientCrops";
    case ErrorKind::NTooLarge: return "NTooLarge";
    case ErrorKind::DegenerateConcepts: return "DegenerateConcepts";
    case ErrorKind::InvalidProblem: return "InvalidProblem";
    case ErrorKind::ForeignCropId: return "ForeignCropId";
    case ErrorKind::MissingEmbedding: return "MissingEmbedding";
    case ErrorKind::MethodConfigError: return "MethodConfigError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidSet: return "InvalidSet";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorKind::TruncatedPayload: return "TruncatedPayload";
    case ErrorKind::NormViolation: return "NormViolation";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace omatch
