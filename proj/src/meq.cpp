#include "uptake/meq.hpp"

#include <algorithm>
#include <istream>
#include <tuple>

#include "uptake/error.hpp"
#include "uptake/jsonl.hpp"
#include "uptake/wordlist.hpp"

namespace uptake {

CueLexicons CueLexicons::from_files(const std::string& qualifier_path, const std::string& modification_path) {
  CueLexicons cues;
  cues.qualifier_phrases = parse_word_list(text_or_bundled(qualifier_path, "qualifier_phrases.txt"));
  cues.modification_markers = parse_word_list(text_or_bundled(modification_path, "modification_markers.txt"));
  cues.validate();
  return cues;
}

CueLexicons CueLexicons::bundled() { return from_files("", ""); }

void CueLexicons::validate() const {
  if (qualifier_phrases.empty() || modification_markers.empty()) {
    throw Error(ErrorCode::InvalidConfig, "cue lexicons must be non-empty");
  }
}

FeatureVector interaction_features(const MeqLabel& label) {
  const bool e = label.enthusiasm, q = label.qualifier, m = label.modification;
  FeatureVector out;
  out.set("meq:E", e);
  out.set("meq:Q", q);
  out.set("meq:M", m);
  out.set("meq:EQ", e && q);
  out.set("meq:EM", e && m);
  out.set("meq:QM", q && m);
  out.set("meq:EQM", e && q && m);
  return out;
}

std::map<std::string, MeqLabel> merge_annotations(std::span<const MeqAnnotation> annotations, MergePolicy policy) {
  std::map<std::string, std::vector<const MeqAnnotation*>> by_post;
  for (const auto& a : annotations) by_post[a.post_id].push_back(&a);

  std::map<std::string, MeqLabel> out;
  for (auto& [post_id, group] : by_post) {
    std::sort(group.begin(), group.end(), [](const MeqAnnotation* a, const MeqAnnotation* b) {
      return std::tie(a->created_at, a->annotator) < std::tie(b->created_at, b->annotator);
    });
    MeqLabel merged = group.front()->label;
    if (policy != MergePolicy::FirstWriter) {
      for (const auto* a : group) {
        if (policy == MergePolicy::Conjunction) {
          merged.enthusiasm = merged.enthusiasm && a->label.enthusiasm;
          merged.qualifier = merged.qualifier && a->label.qualifier;
          merged.modification = merged.modification && a->label.modification;
        } else {
          merged.enthusiasm = merged.enthusiasm || a->label.enthusiasm;
          merged.qualifier = merged.qualifier || a->label.qualifier;
          merged.modification = merged.modification || a->label.modification;
        }
      }
    }
    out.emplace(post_id, merged);
  }
  return out;
}

MeqLabel suggest_meq(const TokenizedPost& post, std::string_view raw_text, const SentimentScores& scores,
                     const CueLexicons& cues) {
  const std::string text = ascii_lower(raw_text);
  auto any_phrase = [&](const std::set<std::string>& phrases) {
    return std::any_of(phrases.begin(), phrases.end(),
                       [&](const std::string& phrase) { return text.find(phrase) != std::string::npos; });
  };
  MeqLabel label;
  label.enthusiasm = post.exclamation_count >= 1 && scores.compound > kPositiveCompoundThreshold;
  label.qualifier = any_phrase(cues.qualifier_phrases);
  label.modification = any_phrase(cues.modification_markers);
  return label;
}

namespace {

MeqAnnotation parse_annotation(const jsonl::Json& obj, std::string_view source, std::size_t line) {
  MeqAnnotation a;
  a.post_id = jsonl::require_string(obj, "post_id", source, line);
  a.annotator = obj.contains("annotator") ? jsonl::require_string(obj, "annotator", source, line) : "gold";
  a.created_at = obj.contains("created_at") ? jsonl::require_int(obj, "created_at", source, line) : 0;
  a.label.enthusiasm = jsonl::require_bool(obj, "E", source, line);
  a.label.qualifier = jsonl::require_bool(obj, "Q", source, line);
  a.label.modification = jsonl::require_bool(obj, "M", source, line);
  return a;
}

}  // namespace

std::vector<MeqAnnotation> read_annotations_jsonl(std::istream& in) {
  std::vector<MeqAnnotation> out;
  jsonl::for_each_object(in, "meq.jsonl", [&](std::size_t line, const jsonl::Json& obj) {
    out.push_back(parse_annotation(obj, "meq.jsonl", line));
  });
  return out;
}

MeqAnnotation annotation_from_json_text(std::string_view text, std::string_view source, std::size_t line) {
  auto obj = jsonl::Json::parse(text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) throw MalformedRecord(source, line, "body is not a JSON object");
  return parse_annotation(obj, source, line);
}

std::string annotation_to_json_line(const MeqAnnotation& a) {
  jsonl::OrderedJson obj;
  obj["post_id"] = a.post_id;
  obj["annotator"] = a.annotator;
  obj["E"] = a.label.enthusiasm;
  obj["Q"] = a.label.qualifier;
  obj["M"] = a.label.modification;
  obj["created_at"] = a.created_at;
  return obj.dump();
}

}  // namespace uptake
