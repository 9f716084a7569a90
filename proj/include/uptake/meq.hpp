#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uptake/sentiment.hpp"
#include "uptake/textfeat.hpp"

namespace uptake {

/// Presence of the three influence cues in a post.
struct MeqLabel {
  bool enthusiasm = false;
  bool qualifier = false;
  bool modification = false;

  bool any() const { return enthusiasm || qualifier || modification; }
  bool operator==(const MeqLabel&) const = default;
};

struct MeqAnnotation {
  std::string post_id;
  std::string annotator;
  MeqLabel label;
  std::int64_t created_at = 0;

  bool operator==(const MeqAnnotation&) const = default;
};

struct CueLexicons {
  std::set<std::string> qualifier_phrases;
  std::set<std::string> modification_markers;

  static CueLexicons bundled();
  /// Empty paths fall back to the bundled lists.
  static CueLexicons from_files(const std::string& qualifier_path, const std::string& modification_path);
  void validate() const;
};

/// meq:E, meq:Q, meq:M and the conjunctions meq:EQ, meq:EM, meq:QM, meq:EQM.
FeatureVector interaction_features(const MeqLabel& label);

enum class MergePolicy { FirstWriter, Conjunction, Disjunction };

/// Resolves possibly-multiple annotations per post. FirstWriter picks the
/// earliest created_at, ties broken by annotator id.
std::map<std::string, MeqLabel> merge_annotations(std::span<const MeqAnnotation> annotations, MergePolicy policy);

/// Heuristic cue suggestion for annotators. Never a gold label.
MeqLabel suggest_meq(const TokenizedPost& post, std::string_view raw_text, const SentimentScores& scores,
                     const CueLexicons& cues);

/// Compound score above which a post counts as positive for enthusiasm.
inline constexpr double kPositiveCompoundThreshold = 0.05;

/// Reads meq.jsonl. Lines without "annotator"/"created_at" (the synthetic
/// ground-truth format) are read as annotator "gold" at created_at 0.
std::vector<MeqAnnotation> read_annotations_jsonl(std::istream& in);
std::string annotation_to_json_line(const MeqAnnotation& annotation);
/// Throws MalformedRecord on schema violations.
MeqAnnotation annotation_from_json_text(std::string_view text, std::string_view source, std::size_t line);

}  // namespace uptake
