#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "uptake/corpus.hpp"
#include "uptake/label.hpp"

namespace uptake {

struct InfluenceConfig {
  /// Forward exposure window after a post (default one week).
  std::int64_t window_seconds = 7 * 24 * 3600;
  /// Also treat everyone who posted at or before the post as exposed.
  bool include_prior_posters = false;
  bool exclude_author = true;
  /// Users who adopted the pattern at or before the post stay in n but never count toward x.
  bool exclude_prior_adopters_from_numerator = true;
  /// Adoptions later than t + horizon do not count. Unbounded when empty.
  std::optional<std::int64_t> adoption_horizon_seconds;

  /// Throws Error(InvalidConfig).
  void validate() const;
};

struct ExposureRecord {
  std::string post_id;
  std::set<std::string> exposed_users;
};

struct UptakeRecord {
  std::string post_id;
  std::string pattern;
  std::int64_t n = 0;  // exposed users
  std::int64_t x = 0;  // exposed users who adopted after the post
  /// 100 * x / n; empty when n == 0.
  std::optional<double> percent_uptake;

  bool operator==(const UptakeRecord&) const = default;
};

struct LabeledPost {
  std::string post_id;
  Label label = Label::NonInfluential;
  std::vector<UptakeRecord> uptake_records;

  bool operator==(const LabeledPost&) const = default;
};

/// Users presumed to have read thread.posts[post_index]. Throws Error(IndexOutOfRange).
ExposureRecord compute_exposure(const Thread& thread, std::size_t post_index, const InfluenceConfig& config);

/// Throws Error(PatternNotMentioned) if `pattern` is not among the post's mentions.
UptakeRecord compute_uptake(const Post& post, std::string_view pattern, const ExposureRecord& exposure,
                            const AdoptionIndex& adoptions, const InfluenceConfig& config);

/// One entry per pattern-mentioning post with non-empty exposure, in corpus order.
/// Influential iff any mentioned pattern has x >= 1.
std::vector<LabeledPost> label_corpus(const Corpus& corpus, const InfluenceConfig& config);

void write_labeled_jsonl(std::ostream& out, const std::vector<LabeledPost>& labeled);
std::vector<LabeledPost> read_labeled_jsonl(std::istream& in);

}  // namespace uptake
