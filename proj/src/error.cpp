#include "uptake/error.hpp"

namespace uptake {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::DuplicatePostId: return "DuplicatePostId";
    case ErrorCode::NegativeTimestamp: return "NegativeTimestamp";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::PatternNotMentioned: return "PatternNotMentioned";
    case ErrorCode::SingleClassData: return "SingleClassData";
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::TooFewExamples: return "TooFewExamples";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::InvalidOverlap: return "InvalidOverlap";
    case ErrorCode::UnknownAnnotator: return "UnknownAnnotator";
    case ErrorCode::DuplicateAnnotation: return "DuplicateAnnotation";
    case ErrorCode::NotAssigned: return "NotAssigned";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

MalformedRecord::MalformedRecord(std::string_view source, std::size_t line, const std::string& reason)
    : Error(ErrorCode::MalformedRecord, std::string(source) + " line " + std::to_string(line) + ": " + reason),
      line_(line),
      reason_(reason) {}

}  // namespace uptake
