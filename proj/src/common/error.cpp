#include "charprobe/common/error.hpp"

namespace charprobe {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnreadablePath: return "UnreadablePath";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::EmptyTweet: return "EmptyTweet";
    case ErrorCode::EmptySynopsis: return "EmptySynopsis";
    case ErrorCode::UnknownQuestion: return "UnknownQuestion";
    case ErrorCode::UnknownTemplate: return "UnknownTemplate";
    case ErrorCode::EmptyPromptList: return "EmptyPromptList";
    case ErrorCode::BackendUnreachable: return "BackendUnreachable";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::ZeroCentroid: return "ZeroCentroid";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SingleCluster: return "SingleCluster";
    case ErrorCode::CoverageGap: return "CoverageGap";
    case ErrorCode::UnknownEntailment: return "UnknownEntailment";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::DegenerateMarginals: return "DegenerateMarginals";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NoOverlap: return "NoOverlap";
  }
  return "Unknown";
}

}  // namespace charprobe
