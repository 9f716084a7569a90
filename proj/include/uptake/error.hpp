#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uptake {

enum class ErrorCode {
  MalformedRecord,
  DuplicatePostId,
  NegativeTimestamp,
  InvalidConfig,
  IndexOutOfRange,
  PatternNotMentioned,
  SingleClassData,
  NonFiniteFeature,
  TooFewExamples,
  LengthMismatch,
  EmptyMatrix,
  NoOverlap,
  InvalidOverlap,
  UnknownAnnotator,
  DuplicateAnnotation,
  NotAssigned,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Base error for all library failures; `code()` identifies the contract violation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A JSONL record that failed to parse or violated its schema. Lines are 1-based.
class MalformedRecord : public Error {
 public:
  MalformedRecord(std::string_view source, std::size_t line, const std::string& reason);
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

}  // namespace uptake
