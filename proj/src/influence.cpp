#include "uptake/influence.hpp"

#include <algorithm>
#include <ostream>

#include "uptake/error.hpp"
#include "uptake/jsonl.hpp"

namespace uptake {

void InfluenceConfig::validate() const {
  if (window_seconds <= 0) throw Error(ErrorCode::InvalidConfig, "window_seconds must be positive");
  if (adoption_horizon_seconds && *adoption_horizon_seconds <= 0) {
    throw Error(ErrorCode::InvalidConfig, "adoption_horizon_seconds must be positive");
  }
}

ExposureRecord compute_exposure(const Thread& thread, std::size_t post_index, const InfluenceConfig& config) {
  if (post_index >= thread.posts.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "post index " + std::to_string(post_index) + " in thread " +
                                                thread.thread_id + " of size " + std::to_string(thread.posts.size()));
  }
  const Post& post = thread.posts[post_index];
  const Timestamp t = post.timestamp;
  ExposureRecord record{post.post_id, {}};
  for (std::size_t j = 0; j < thread.posts.size(); ++j) {
    if (j == post_index) continue;
    const Post& other = thread.posts[j];
    const bool in_window = other.timestamp > t && other.timestamp - t <= config.window_seconds;
    const bool prior = other.timestamp <= t;
    if (in_window || (config.include_prior_posters && prior)) record.exposed_users.insert(other.author);
  }
  if (config.exclude_author) record.exposed_users.erase(post.author);
  return record;
}

UptakeRecord compute_uptake(const Post& post, std::string_view pattern, const ExposureRecord& exposure,
                            const AdoptionIndex& adoptions, const InfluenceConfig& config) {
  if (std::find(post.mentioned_patterns.begin(), post.mentioned_patterns.end(), pattern) ==
      post.mentioned_patterns.end()) {
    throw Error(ErrorCode::PatternNotMentioned, "post " + post.post_id + " does not mention " + std::string(pattern));
  }
  const Timestamp t = post.timestamp;
  UptakeRecord record{post.post_id, std::string(pattern), static_cast<std::int64_t>(exposure.exposed_users.size()), 0,
                      std::nullopt};
  for (const auto& user : exposure.exposed_users) {
    const auto times = adoptions.times(user, pattern);
    if (times.empty()) continue;
    // times is sorted ascending
    if (config.exclude_prior_adopters_from_numerator && times.front() <= t) continue;
    const auto first_after = std::upper_bound(times.begin(), times.end(), t);
    if (first_after == times.end()) continue;
    if (config.adoption_horizon_seconds && *first_after - t > *config.adoption_horizon_seconds) continue;
    ++record.x;
  }
  if (record.n > 0) record.percent_uptake = 100.0 * static_cast<double>(record.x) / static_cast<double>(record.n);
  return record;
}

std::vector<LabeledPost> label_corpus(const Corpus& corpus, const InfluenceConfig& config) {
  config.validate();
  std::vector<LabeledPost> out;
  for (const auto& [thread_id, thread] : corpus.threads()) {
    for (std::size_t i = 0; i < thread.posts.size(); ++i) {
      const Post& post = thread.posts[i];
      if (post.mentioned_patterns.empty()) continue;
      const auto exposure = compute_exposure(thread, i, config);
      if (exposure.exposed_users.empty()) continue;
      LabeledPost labeled{post.post_id, Label::NonInfluential, {}};
      for (const auto& pattern : post.mentioned_patterns) {
        labeled.uptake_records.push_back(compute_uptake(post, pattern, exposure, corpus.adoption_index(), config));
        if (labeled.uptake_records.back().x >= 1) labeled.label = Label::Influential;
      }
      out.push_back(std::move(labeled));
    }
  }
  return out;
}

void write_labeled_jsonl(std::ostream& out, const std::vector<LabeledPost>& labeled) {
  for (const auto& lp : labeled) {
    jsonl::OrderedJson obj;
    obj["post_id"] = lp.post_id;
    obj["label"] = to_string(lp.label);
    auto uptake = jsonl::OrderedJson::array();
    for (const auto& r : lp.uptake_records) {
      jsonl::OrderedJson u;
      u["pattern"] = r.pattern;
      u["n"] = r.n;
      u["x"] = r.x;
      u["percent"] = r.percent_uptake ? jsonl::OrderedJson(*r.percent_uptake) : jsonl::OrderedJson(nullptr);
      uptake.push_back(std::move(u));
    }
    obj["uptake"] = std::move(uptake);
    out << obj.dump() << '\n';
  }
}

std::vector<LabeledPost> read_labeled_jsonl(std::istream& in) {
  constexpr std::string_view source = "labeled.jsonl";
  std::vector<LabeledPost> out;
  jsonl::for_each_object(in, source, [&](std::size_t line, const jsonl::Json& obj) {
    LabeledPost lp;
    lp.post_id = jsonl::require_string(obj, "post_id", source, line);
    const auto label = jsonl::require_string(obj, "label", source, line);
    if (label == "influential") {
      lp.label = Label::Influential;
    } else if (label == "non_influential") {
      lp.label = Label::NonInfluential;
    } else {
      throw MalformedRecord(source, line, "label must be influential or non_influential");
    }
    if (auto it = obj.find("uptake"); it != obj.end()) {
      if (!it->is_array()) throw MalformedRecord(source, line, "uptake must be an array");
      for (const auto& u : *it) {
        if (!u.is_object()) throw MalformedRecord(source, line, "uptake entries must be objects");
        UptakeRecord r;
        r.post_id = lp.post_id;
        r.pattern = jsonl::require_string(u, "pattern", source, line);
        r.n = jsonl::require_int(u, "n", source, line);
        r.x = jsonl::require_int(u, "x", source, line);
        if (auto p = u.find("percent"); p != u.end() && p->is_number()) r.percent_uptake = p->get<double>();
        lp.uptake_records.push_back(std::move(r));
      }
    }
    out.push_back(std::move(lp));
  });
  return out;
}

}  // namespace uptake
