#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uptake {

struct TokenizedPost {
  std::vector<std::string> tokens;  // lowercase, no pure-punctuation entries
  int exclamation_count = 0;        // '!' characters in the raw text
  std::size_t raw_length_chars = 0;  // code points in the raw text

  bool operator==(const TokenizedPost&) const = default;
};

/// Lowercases, splits on Unicode whitespace and strips leading/trailing
/// punctuation from each token. Interior apostrophes and hyphens survive.
TokenizedPost tokenize(std::string_view text);

/// Sparse name -> value map. Zero values are never stored. Names carry a
/// namespace prefix: "uni:", "wc:", "sent:" or "meq:".
class FeatureVector {
 public:
  using Map = std::map<std::string, double, std::less<>>;

  FeatureVector() = default;

  /// Stores `value` under `name`, or erases the entry when value == 0.
  void set(std::string_view name, double value);
  double get(std::string_view name) const;
  bool contains(std::string_view name) const { return values_.find(name) != values_.end(); }
  /// Copies every entry of `other`; entries in `other` win on collision.
  void merge(const FeatureVector& other);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  Map::const_iterator begin() const { return values_.begin(); }
  Map::const_iterator end() const { return values_.end(); }

  bool operator==(const FeatureVector&) const = default;

 private:
  Map values_;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> sorted_tokens, int min_document_frequency);

  bool contains(std::string_view token) const { return index_.find(token) != index_.end(); }
  /// Column of a token; throws std::out_of_range if absent.
  std::size_t index_of(std::string_view token) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  int min_document_frequency() const { return min_df_; }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, std::size_t, std::less<>> index_;
  int min_df_ = 1;
};

/// Tokens present in at least `min_df` posts, lexicographically ordered.
Vocabulary build_vocabulary(std::span<const TokenizedPost> training_posts, int min_df);
Vocabulary build_vocabulary(std::span<const TokenizedPost* const> training_posts, int min_df);

/// Binary presence features "uni:<token>" for in-vocabulary tokens.
FeatureVector unigram_features(const TokenizedPost& post, const Vocabulary& vocab);

struct WordLists {
  std::set<std::string> pronouns;
  std::set<std::string> articles;
  std::set<std::string> tobeverbs;
  std::set<std::string> subordinators;
  std::set<std::string> easy_words;
  std::set<std::string> nominalization_suffixes;
  std::size_t nominalization_min_length = 8;

  /// The lists shipped under data/.
  static WordLists bundled();
  /// Throws Error(InvalidConfig) if a list is empty or not lowercase.
  void validate() const;
};

/// Raw counts: wc:pronoun, wc:article, wc:tobeverb, wc:subordination,
/// wc:nominalization, wc:complex_wrds_dc, wc:post_length.
FeatureVector word_category_features(const TokenizedPost& post, const WordLists& lists);

struct FeatureRow {
  std::string post_id;
  std::string label;
  const FeatureVector* features = nullptr;
};

/// Header of sorted feature names after post_id,label; zero cells are empty.
void write_features_csv(std::ostream& out, std::span<const FeatureRow> rows);

/// Shortest round-trip decimal representation.
std::string format_number(double value);

}  // namespace uptake
