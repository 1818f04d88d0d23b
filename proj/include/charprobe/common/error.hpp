#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace charprobe {

enum class ErrorCode {
  InvalidArgument,
  InvalidConfig,
  IoError,
  UnreadablePath,
  MalformedRecord,
  EmptyText,
  EmptyTweet,
  EmptySynopsis,
  UnknownQuestion,
  UnknownTemplate,
  EmptyPromptList,
  BackendUnreachable,
  MalformedResponse,
  Timeout,
  DimensionMismatch,
  EmptySet,
  ZeroCentroid,
  TooFewPoints,
  ShapeMismatch,
  SingleCluster,
  CoverageGap,
  UnknownEntailment,
  InvariantViolation,
  DegenerateMarginals,
  LengthMismatch,
  NoOverlap,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace charprobe
