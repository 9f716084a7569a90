#include "uptake/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>

#include "uptake/error.hpp"
#include "uptake/jsonl.hpp"

namespace uptake {

using jsonl::Json;
using jsonl::OrderedJson;

bool post_precedes(const Post& a, const Post& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.post_id < b.post_id;
}

std::string_view to_string(AdoptionKind kind) {
  return kind == AdoptionKind::Project ? "project" : "queue";
}

AdoptionIndex::AdoptionIndex(std::span<const AdoptionEvent> events) {
  for (const auto& e : events) by_key_[{e.user, e.pattern}].push_back(e.timestamp);
  for (auto& [key, times] : by_key_) std::sort(times.begin(), times.end());
}

std::span<const Timestamp> AdoptionIndex::times(std::string_view user, std::string_view pattern) const {
  auto it = by_key_.find(std::pair<std::string, std::string>(user, pattern));
  if (it == by_key_.end()) return {};
  return it->second;
}

Corpus Corpus::assemble(std::vector<Post> posts, std::vector<AdoptionEvent> adoptions) {
  Corpus c;
  for (auto& p : posts) {
    auto& thread = c.threads_[p.thread_id];
    thread.thread_id = p.thread_id;
    thread.posts.push_back(std::move(p));
  }
  for (auto& [id, thread] : c.threads_) {
    std::stable_sort(thread.posts.begin(), thread.posts.end(), post_precedes);
    for (std::size_t i = 0; i < thread.posts.size(); ++i) {
      c.post_locations_.try_emplace(thread.posts[i].post_id, id, i);
    }
  }
  c.adoptions_ = std::move(adoptions);
  c.index_ = AdoptionIndex(c.adoptions_);
  return c;
}

std::size_t Corpus::post_count() const {
  std::size_t n = 0;
  for (const auto& [id, t] : threads_) n += t.posts.size();
  return n;
}

const Post* Corpus::find_post(std::string_view post_id) const {
  auto it = post_locations_.find(post_id);
  if (it == post_locations_.end()) return nullptr;
  return &threads_.at(it->second.first).posts[it->second.second];
}

std::vector<const Post*> Corpus::posts() const {
  std::vector<const Post*> out;
  for (const auto& [id, t] : threads_) {
    for (const auto& p : t.posts) out.push_back(&p);
  }
  return out;
}

namespace {

constexpr std::string_view kPostsSource = "posts.jsonl";
constexpr std::string_view kAdoptionsSource = "adoptions.jsonl";

Post parse_post(const Json& obj, std::size_t line) {
  Post p;
  p.post_id = jsonl::require_string(obj, "post_id", kPostsSource, line);
  p.thread_id = jsonl::require_string(obj, "thread_id", kPostsSource, line);
  p.author = jsonl::require_string(obj, "author", kPostsSource, line);
  p.timestamp = jsonl::require_int(obj, "timestamp", kPostsSource, line);
  p.text = jsonl::require_string(obj, "text", kPostsSource, line);
  auto it = obj.find("patterns");
  if (it == obj.end()) throw MalformedRecord(kPostsSource, line, "missing field 'patterns'");
  if (!it->is_array()) throw MalformedRecord(kPostsSource, line, "field 'patterns' must be an array");
  std::set<std::string> seen;
  for (const auto& v : *it) {
    if (!v.is_string()) throw MalformedRecord(kPostsSource, line, "pattern ids must be strings");
    auto id = v.get<std::string>();
    if (!seen.insert(id).second) throw MalformedRecord(kPostsSource, line, "duplicate pattern '" + id + "'");
    p.mentioned_patterns.push_back(std::move(id));
  }
  if (p.timestamp < 0) {
    throw Error(ErrorCode::NegativeTimestamp, "post " + p.post_id + " at line " + std::to_string(line));
  }
  return p;
}

AdoptionEvent parse_adoption(const Json& obj, std::size_t line) {
  AdoptionEvent e;
  e.user = jsonl::require_string(obj, "user", kAdoptionsSource, line);
  e.pattern = jsonl::require_string(obj, "pattern", kAdoptionsSource, line);
  e.timestamp = jsonl::require_int(obj, "timestamp", kAdoptionsSource, line);
  const auto kind = jsonl::require_string(obj, "kind", kAdoptionsSource, line);
  if (kind == "project") {
    e.kind = AdoptionKind::Project;
  } else if (kind == "queue") {
    e.kind = AdoptionKind::Queue;
  } else {
    throw MalformedRecord(kAdoptionsSource, line, "kind must be \"project\" or \"queue\"");
  }
  if (e.timestamp < 0) {
    throw Error(ErrorCode::NegativeTimestamp, "adoption at line " + std::to_string(line));
  }
  return e;
}

}  // namespace

Corpus load_corpus(std::istream& posts_in, std::istream& adoptions_in) {
  std::vector<Post> posts;
  std::set<std::string> ids;
  jsonl::for_each_object(posts_in, kPostsSource, [&](std::size_t line, const Json& obj) {
    auto p = parse_post(obj, line);
    if (!ids.insert(p.post_id).second) {
      throw Error(ErrorCode::DuplicatePostId, p.post_id + " at line " + std::to_string(line));
    }
    posts.push_back(std::move(p));
  });
  std::vector<AdoptionEvent> adoptions;
  jsonl::for_each_object(adoptions_in, kAdoptionsSource,
                         [&](std::size_t line, const Json& obj) { adoptions.push_back(parse_adoption(obj, line)); });
  return Corpus::assemble(std::move(posts), std::move(adoptions));
}

Corpus load_corpus_files(const std::string& posts_path, const std::string& adoptions_path) {
  std::ifstream posts(posts_path);
  if (!posts) throw Error(ErrorCode::Io, "cannot open " + posts_path);
  std::ifstream adoptions(adoptions_path);
  if (!adoptions) throw Error(ErrorCode::Io, "cannot open " + adoptions_path);
  return load_corpus(posts, adoptions);
}

std::vector<std::string> validate_corpus(const Corpus& corpus) {
  std::vector<std::string> violations;
  std::map<std::string, int> id_counts;
  for (const auto& [thread_id, thread] : corpus.threads()) {
    for (std::size_t i = 0; i < thread.posts.size(); ++i) {
      const auto& p = thread.posts[i];
      ++id_counts[p.post_id];
      if (p.thread_id != thread_id) {
        violations.push_back("post " + p.post_id + " filed under thread " + thread_id + " but names " + p.thread_id);
      }
      if (p.timestamp < 0) violations.push_back("post " + p.post_id + " has negative timestamp");
      std::set<std::string> seen(p.mentioned_patterns.begin(), p.mentioned_patterns.end());
      if (seen.size() != p.mentioned_patterns.size()) {
        violations.push_back("post " + p.post_id + " repeats a mentioned pattern");
      }
      if (i > 0 && !post_precedes(thread.posts[i - 1], p)) {
        violations.push_back("thread " + thread_id + " is out of order at post " + p.post_id);
      }
    }
  }
  for (const auto& [id, count] : id_counts) {
    if (count > 1) violations.push_back("duplicate post_id " + id);
  }
  for (const auto& e : corpus.adoptions()) {
    if (e.timestamp < 0) {
      violations.push_back("adoption of " + e.pattern + " by " + e.user + " has negative timestamp");
    }
  }
  return violations;
}

void write_posts_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const Post* p : corpus.posts()) {
    OrderedJson obj;
    obj["post_id"] = p->post_id;
    obj["thread_id"] = p->thread_id;
    obj["author"] = p->author;
    obj["timestamp"] = p->timestamp;
    obj["text"] = p->text;
    obj["patterns"] = p->mentioned_patterns;
    out << obj.dump() << '\n';
  }
}

void write_adoptions_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const auto& e : corpus.adoptions()) {
    OrderedJson obj;
    obj["user"] = e.user;
    obj["pattern"] = e.pattern;
    obj["timestamp"] = e.timestamp;
    obj["kind"] = to_string(e.kind);
    out << obj.dump() << '\n';
  }
}

}  // namespace uptake
