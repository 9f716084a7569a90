#include "uptake/annotate.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "uptake/error.hpp"
#include "uptake/jsonl.hpp"
#include "uptake/rng.hpp"

namespace uptake {

SessionAssignment plan_assignment(std::span<const std::string> post_ids, std::span<const std::string> annotators,
                                  std::size_t overlap_count, std::uint64_t seed) {
  if (annotators.empty()) throw Error(ErrorCode::InvalidOverlap, "at least one annotator is required");
  if (overlap_count > post_ids.size()) {
    throw Error(ErrorCode::InvalidOverlap, "overlap of " + std::to_string(overlap_count) + " exceeds " +
                                               std::to_string(post_ids.size()) + " posts");
  }
  std::set<std::string> distinct(annotators.begin(), annotators.end());
  if (distinct.size() != annotators.size()) throw Error(ErrorCode::InvalidOverlap, "annotator names must be unique");

  std::vector<std::string> order(post_ids.begin(), post_ids.end());
  std::sort(order.begin(), order.end());
  Rng rng(seed);
  rng.shuffle(order);

  SessionAssignment out;
  for (const auto& a : annotators) out.assignment[a];
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i < overlap_count) {
      out.overlap_set.insert(order[i]);
      for (const auto& a : annotators) out.assignment[a].push_back(order[i]);
    } else {
      out.assignment[annotators[(i - overlap_count) % annotators.size()]].push_back(order[i]);
    }
  }
  return out;
}

std::string assignment_to_json(const SessionAssignment& assignment) {
  jsonl::OrderedJson obj;
  obj["assignment"] = assignment.assignment;
  obj["overlap"] = assignment.overlap_set;
  return obj.dump(2) + "\n";
}

SessionAssignment assignment_from_json(std::string_view text) {
  auto obj = jsonl::Json::parse(text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object() || !obj.contains("assignment") || !obj.contains("overlap")) {
    throw MalformedRecord("assignment.json", 1, "expected {\"assignment\": {...}, \"overlap\": [...]}");
  }
  SessionAssignment out;
  try {
    out.assignment = obj["assignment"].get<std::map<std::string, std::vector<std::string>>>();
    out.overlap_set = obj["overlap"].get<std::set<std::string>>();
  } catch (const jsonl::Json::exception& e) {
    throw MalformedRecord("assignment.json", 1, e.what());
  }
  return out;
}

// ---------------------------------------------------------------- log

AnnotationLog::AnnotationLog(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  // Drop an unterminated tail: it was never acknowledged.
  const auto last_nl = content.rfind('\n');
  const std::size_t keep = last_nl == std::string::npos ? 0 : last_nl + 1;
  const bool torn = keep != content.size();
  content.resize(keep);
  std::istringstream lines(content);
  entries_ = read_annotations_jsonl(lines);
  if (torn) std::filesystem::resize_file(path_, keep);
}

void AnnotationLog::append(const MeqAnnotation& annotation) {
  const std::string line = annotation_to_json_line(annotation) + "\n";
  const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorCode::Io, "cannot open " + path_.string() + ": " + std::strerror(errno));
  std::size_t written = 0;
  while (written < line.size()) {
    const auto n = ::write(fd, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string reason = std::strerror(errno);
      ::close(fd);
      throw Error(ErrorCode::Io, "write to " + path_.string() + " failed: " + reason);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    const std::string reason = std::strerror(errno);
    ::close(fd);
    throw Error(ErrorCode::Io, "fsync of " + path_.string() + " failed: " + reason);
  }
  ::close(fd);
  entries_.push_back(annotation);
}

// ---------------------------------------------------------------- service

std::string task_to_json(const AnnotationTask& task) {
  jsonl::OrderedJson obj;
  obj["post_id"] = task.post_id;
  obj["text"] = task.text;
  obj["suggestion"] = {{"E", task.suggestion.enthusiasm},
                       {"Q", task.suggestion.qualifier},
                       {"M", task.suggestion.modification}};
  obj["remaining"] = task.remaining;
  return obj.dump();
}

AnnotationService::AnnotationService(std::vector<ServedPost> posts, SessionAssignment assignment,
                                     std::filesystem::path log_path, const Resources& resources)
    : assignment_(std::move(assignment)),
      lexicon_(resources.lexicon),
      cues_(resources.cues),
      log_(std::move(log_path)) {
  for (auto& p : posts) {
    auto id = p.post_id;
    posts_.emplace(std::move(id), std::move(p));
  }
  for (const auto& [annotator, ids] : assignment_.assignment) {
    for (const auto& id : ids) {
      if (!posts_.count(id)) throw Error(ErrorCode::InvalidOverlap, "assigned post " + id + " is not being served");
    }
  }
  for (const auto& a : log_.entries()) done_.emplace(a.annotator, a.post_id);
}

const std::vector<std::string>& AnnotationService::assigned_to(std::string_view annotator) const {
  auto it = assignment_.assignment.find(std::string(annotator));
  if (it == assignment_.assignment.end()) {
    throw Error(ErrorCode::UnknownAnnotator, "unknown annotator " + std::string(annotator));
  }
  return it->second;
}

std::optional<AnnotationTask> AnnotationService::next_task(std::string_view annotator) const {
  std::lock_guard lock(mutex_);
  const auto& ids = assigned_to(annotator);
  const std::string who(annotator);
  std::optional<AnnotationTask> task;
  for (const auto& id : ids) {
    if (done_.count({who, id})) continue;
    if (!task) {
      const auto& post = posts_.find(id)->second;
      const auto tokens = tokenize(post.text);
      task = AnnotationTask{id, post.text, suggest_meq(tokens, post.text, score(tokens, lexicon_), cues_), 0};
    }
    ++task->remaining;
  }
  return task;
}

void AnnotationService::submit(const MeqAnnotation& annotation) {
  std::lock_guard lock(mutex_);
  const auto& ids = assigned_to(annotation.annotator);
  if (std::find(ids.begin(), ids.end(), annotation.post_id) == ids.end()) {
    throw Error(ErrorCode::NotAssigned, "post " + annotation.post_id + " is not assigned to " + annotation.annotator);
  }
  if (done_.count({annotation.annotator, annotation.post_id})) {
    throw Error(ErrorCode::DuplicateAnnotation,
                annotation.annotator + " already annotated " + annotation.post_id);
  }
  log_.append(annotation);
  done_.emplace(annotation.annotator, annotation.post_id);
}

AgreementReport AnnotationService::agreement(std::string_view annotator_a, std::string_view annotator_b) const {
  std::lock_guard lock(mutex_);
  return uptake::agreement(log_.entries(), annotator_a, annotator_b);
}

std::vector<AnnotatorProgress> AnnotationService::progress() const {
  std::lock_guard lock(mutex_);
  std::vector<AnnotatorProgress> out;
  for (const auto& [annotator, ids] : assignment_.assignment) {
    AnnotatorProgress p{annotator, ids.size(), 0};
    for (const auto& id : ids) p.annotated += done_.count({annotator, id});
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<MeqAnnotation> AnnotationService::annotations() const {
  std::lock_guard lock(mutex_);
  return log_.entries();
}

std::string AnnotationService::export_jsonl() const {
  std::lock_guard lock(mutex_);
  std::string out;
  for (const auto& a : log_.entries()) out += annotation_to_json_line(a) + "\n";
  return out;
}

}  // namespace uptake
