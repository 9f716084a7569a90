#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace uptake {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

struct Post {
  std::string post_id;
  std::string thread_id;
  std::string author;
  Timestamp timestamp = 0;
  std::string text;
  std::vector<std::string> mentioned_patterns;

  bool operator==(const Post&) const = default;
};

/// Canonical in-thread order: timestamp, then post_id.
bool post_precedes(const Post& a, const Post& b);

struct Thread {
  std::string thread_id;
  std::vector<Post> posts;  // sorted by post_precedes
};

enum class AdoptionKind { Project, Queue };

std::string_view to_string(AdoptionKind kind);

struct AdoptionEvent {
  std::string user;
  std::string pattern;
  Timestamp timestamp = 0;
  AdoptionKind kind = AdoptionKind::Project;

  bool operator==(const AdoptionEvent&) const = default;
};

/// Sorted adoption timestamps per (user, pattern).
class AdoptionIndex {
 public:
  AdoptionIndex() = default;
  explicit AdoptionIndex(std::span<const AdoptionEvent> events);

  std::span<const Timestamp> times(std::string_view user, std::string_view pattern) const;
  std::size_t key_count() const { return by_key_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, std::vector<Timestamp>, std::less<>> by_key_;
};

/// Threads of posts plus the adoption trace. Immutable once assembled.
class Corpus {
 public:
  Corpus() = default;

  /// Groups posts into sorted threads and builds indexes. Performs no
  /// validation; see load_corpus / validate_corpus.
  static Corpus assemble(std::vector<Post> posts, std::vector<AdoptionEvent> adoptions);

  const std::map<std::string, Thread>& threads() const { return threads_; }
  const std::vector<AdoptionEvent>& adoptions() const { return adoptions_; }
  const AdoptionIndex& adoption_index() const { return index_; }

  std::size_t post_count() const;
  /// First post with this id in canonical order, or nullptr.
  const Post* find_post(std::string_view post_id) const;
  /// All posts, threads in id order, posts in thread order.
  std::vector<const Post*> posts() const;

 private:
  std::map<std::string, Thread> threads_;
  std::vector<AdoptionEvent> adoptions_;
  AdoptionIndex index_;
  std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> post_locations_;
};

/// Parses posts.jsonl and adoptions.jsonl. Throws MalformedRecord,
/// Error(DuplicatePostId) or Error(NegativeTimestamp).
Corpus load_corpus(std::istream& posts, std::istream& adoptions);
Corpus load_corpus_files(const std::string& posts_path, const std::string& adoptions_path);

/// Every broken invariant, each naming the offending entity. Empty when valid.
std::vector<std::string> validate_corpus(const Corpus& corpus);

void write_posts_jsonl(std::ostream& out, const Corpus& corpus);
void write_adoptions_jsonl(std::ostream& out, const Corpus& corpus);

}  // namespace uptake
