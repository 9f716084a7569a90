#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uptake/eval.hpp"
#include "uptake/meq.hpp"
#include "uptake/pipeline.hpp"

namespace uptake {

struct SessionAssignment {
  std::map<std::string, std::vector<std::string>> assignment;  // annotator -> ordered post ids
  std::set<std::string> overlap_set;                            // assigned to every annotator
};

/// Seeded shuffle of the posts; the first `overlap_count` go to every
/// annotator and the rest are dealt round-robin. Throws Error(InvalidOverlap).
SessionAssignment plan_assignment(std::span<const std::string> post_ids, std::span<const std::string> annotators,
                                  std::size_t overlap_count, std::uint64_t seed);

std::string assignment_to_json(const SessionAssignment& assignment);
SessionAssignment assignment_from_json(std::string_view text);

/// Append-only, fsync'd annotation log (meq.jsonl format). A torn final line
/// left by a crash was never acknowledged and is dropped on open.
class AnnotationLog {
 public:
  explicit AnnotationLog(std::filesystem::path path);

  const std::vector<MeqAnnotation>& entries() const { return entries_; }
  /// Returns only after the record is durable. Throws Error(Io).
  void append(const MeqAnnotation& annotation);

 private:
  std::filesystem::path path_;
  std::vector<MeqAnnotation> entries_;
};

/// What an annotator sees: text and a heuristic suggestion, never the influence label.
struct AnnotationTask {
  std::string post_id;
  std::string text;
  MeqLabel suggestion;
  std::size_t remaining = 0;  // unannotated tasks for this annotator, including this one
};

std::string task_to_json(const AnnotationTask& task);

struct ServedPost {
  std::string post_id;
  std::string text;
};

struct AnnotatorProgress {
  std::string annotator;
  std::size_t assigned = 0;
  std::size_t annotated = 0;
};

/// Thread-safe annotation session. All mutations go through one mutex, so
/// submit/next_task are linearizable.
class AnnotationService {
 public:
  AnnotationService(std::vector<ServedPost> posts, SessionAssignment assignment, std::filesystem::path log_path,
                    const Resources& resources);

  /// Next unannotated assigned post, or nullopt when done. Throws Error(UnknownAnnotator).
  std::optional<AnnotationTask> next_task(std::string_view annotator) const;

  /// Throws Error(UnknownAnnotator), Error(NotAssigned) or Error(DuplicateAnnotation).
  void submit(const MeqAnnotation& annotation);

  /// Throws Error(NoOverlap).
  AgreementReport agreement(std::string_view annotator_a, std::string_view annotator_b) const;
  std::vector<AnnotatorProgress> progress() const;
  std::vector<MeqAnnotation> annotations() const;
  /// The log as meq.jsonl text.
  std::string export_jsonl() const;

  const SessionAssignment& assignment() const { return assignment_; }

 private:
  const std::vector<std::string>& assigned_to(std::string_view annotator) const;

  std::map<std::string, ServedPost, std::less<>> posts_;
  SessionAssignment assignment_;
  SentimentLexicon lexicon_;
  CueLexicons cues_;
  mutable std::mutex mutex_;
  AnnotationLog log_;
  std::set<std::pair<std::string, std::string>> done_;  // (annotator, post_id)
};

}  // namespace uptake
