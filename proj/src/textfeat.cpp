#include "uptake/textfeat.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ostream>

#include "uptake/error.hpp"
#include "uptake/wordlist.hpp"

namespace uptake {
namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;
};

// Malformed bytes decode as themselves with length 1.
CodePoint decode_at(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) return {b0, 1};
  if ((b0 & 0xE0) == 0xC0) {
    const int c1 = cont(1);
    if (c1 >= 0) return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), 2};
  } else if ((b0 & 0xF0) == 0xE0) {
    const int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0) return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
  } else if ((b0 & 0xF8) == 0xF0) {
    const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0) {
      return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
    }
  }
  return {b0, 1};
}

// Start of the code point that ends at byte `end` (exclusive).
std::size_t last_start(std::string_view s, std::size_t end) {
  std::size_t i = end - 1;
  std::size_t steps = 0;
  while (i > 0 && steps < 3 && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) {
    --i;
    ++steps;
  }
  return decode_at(s, i).length == end - i ? i : end - 1;
}

bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_punct(char32_t c) {
  if (c < 0x80) return std::ispunct(static_cast<int>(c)) != 0;
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x3001: case 0x3002: case 0xFF01: case 0xFF0C: case 0xFF0E: case 0xFF1F:
      return true;
    default:
      return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E);
  }
}

std::string_view strip_punct(std::string_view word) {
  while (!word.empty()) {
    const auto cp = decode_at(word, 0);
    if (!is_punct(cp.value)) break;
    word.remove_prefix(cp.length);
  }
  while (!word.empty()) {
    const auto start = last_start(word, word.size());
    if (!is_punct(decode_at(word, start).value)) break;
    word.remove_suffix(word.size() - start);
  }
  return word;
}

}  // namespace

TokenizedPost tokenize(std::string_view text) {
  TokenizedPost out;
  const std::string lowered = ascii_lower(text);
  std::string_view s = lowered;
  std::size_t i = 0;
  std::size_t word_start = std::string_view::npos;
  auto flush = [&](std::size_t end) {
    if (word_start == std::string_view::npos) return;
    const auto token = strip_punct(s.substr(word_start, end - word_start));
    if (!token.empty()) out.tokens.emplace_back(token);
    word_start = std::string_view::npos;
  };
  while (i < s.size()) {
    const auto cp = decode_at(s, i);
    ++out.raw_length_chars;
    if (cp.value == U'!') ++out.exclamation_count;
    if (is_space(cp.value)) {
      flush(i);
    } else if (word_start == std::string_view::npos) {
      word_start = i;
    }
    i += cp.length;
  }
  flush(s.size());
  return out;
}

void FeatureVector::set(std::string_view name, double value) {
  if (value == 0.0) {
    if (auto it = values_.find(name); it != values_.end()) values_.erase(it);
    return;
  }
  if (auto it = values_.find(name); it != values_.end()) {
    it->second = value;
  } else {
    values_.emplace(std::string(name), value);
  }
}

double FeatureVector::get(std::string_view name) const {
  auto it = values_.find(name);
  return it == values_.end() ? 0.0 : it->second;
}

void FeatureVector::merge(const FeatureVector& other) {
  for (const auto& [name, value] : other) set(name, value);
}

Vocabulary::Vocabulary(std::vector<std::string> sorted_tokens, int min_document_frequency)
    : tokens_(std::move(sorted_tokens)), min_df_(min_document_frequency) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
}

std::size_t Vocabulary::index_of(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) throw std::out_of_range("token not in vocabulary: " + std::string(token));
  return it->second;
}

Vocabulary build_vocabulary(std::span<const TokenizedPost* const> training_posts, int min_df) {
  if (min_df < 1) throw Error(ErrorCode::InvalidConfig, "min_df must be >= 1");
  std::map<std::string, int> document_frequency;
  for (const TokenizedPost* post : training_posts) {
    std::set<std::string_view> distinct(post->tokens.begin(), post->tokens.end());
    for (auto token : distinct) ++document_frequency[std::string(token)];
  }
  std::vector<std::string> kept;
  for (auto& [token, df] : document_frequency) {
    if (df >= min_df) kept.push_back(token);
  }
  return Vocabulary(std::move(kept), min_df);
}

Vocabulary build_vocabulary(std::span<const TokenizedPost> training_posts, int min_df) {
  std::vector<const TokenizedPost*> ptrs;
  ptrs.reserve(training_posts.size());
  for (const auto& p : training_posts) ptrs.push_back(&p);
  return build_vocabulary(std::span<const TokenizedPost* const>(ptrs), min_df);
}

FeatureVector unigram_features(const TokenizedPost& post, const Vocabulary& vocab) {
  FeatureVector out;
  for (const auto& token : post.tokens) {
    if (vocab.contains(token)) out.set("uni:" + token, 1.0);
  }
  return out;
}

WordLists WordLists::bundled() {
  WordLists lists;
  lists.pronouns = parse_word_list(bundled_text("pronouns.txt"));
  lists.articles = parse_word_list(bundled_text("articles.txt"));
  lists.tobeverbs = parse_word_list(bundled_text("tobeverbs.txt"));
  lists.subordinators = parse_word_list(bundled_text("subordinators.txt"));
  lists.easy_words = parse_word_list(bundled_text("easy_words.txt"));
  lists.nominalization_suffixes = parse_word_list(bundled_text("nominalization_suffixes.txt"));
  return lists;
}

void WordLists::validate() const {
  const std::pair<const char*, const std::set<std::string>*> all[] = {
      {"pronouns", &pronouns},       {"articles", &articles},     {"tobeverbs", &tobeverbs},
      {"subordinators", &subordinators}, {"easy_words", &easy_words}, {"nominalization_suffixes", &nominalization_suffixes},
  };
  for (const auto& [name, list] : all) {
    if (list->empty()) throw Error(ErrorCode::InvalidConfig, std::string(name) + " list is empty");
    for (const auto& entry : *list) {
      if (entry != ascii_lower(entry)) throw Error(ErrorCode::InvalidConfig, std::string(name) + " entry not lowercase: " + entry);
    }
  }
}

FeatureVector word_category_features(const TokenizedPost& post, const WordLists& lists) {
  double pronoun = 0, article = 0, tobeverb = 0, subordination = 0, nominalization = 0, complex_words = 0;
  for (const auto& token : post.tokens) {
    pronoun += lists.pronouns.count(token);
    article += lists.articles.count(token);
    tobeverb += lists.tobeverbs.count(token);
    subordination += lists.subordinators.count(token);
    if (!lists.easy_words.count(token)) ++complex_words;
    if (token.size() >= lists.nominalization_min_length) {
      const bool has_suffix = std::any_of(lists.nominalization_suffixes.begin(), lists.nominalization_suffixes.end(),
                                          [&](const std::string& suffix) { return token.ends_with(suffix); });
      if (has_suffix) ++nominalization;
    }
  }
  FeatureVector out;
  out.set("wc:pronoun", pronoun);
  out.set("wc:article", article);
  out.set("wc:tobeverb", tobeverb);
  out.set("wc:subordination", subordination);
  out.set("wc:nominalization", nominalization);
  out.set("wc:complex_wrds_dc", complex_words);
  out.set("wc:post_length", static_cast<double>(post.tokens.size()));
  return out;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_features_csv(std::ostream& out, std::span<const FeatureRow> rows) {
  std::set<std::string> names;
  for (const auto& row : rows) {
    for (const auto& [name, value] : *row.features) names.insert(name);
  }
  out << "post_id,label";
  for (const auto& name : names) out << ',' << csv_escape(name);
  out << '\n';
  for (const auto& row : rows) {
    out << csv_escape(row.post_id) << ',' << csv_escape(row.label);
    for (const auto& name : names) {
      out << ',';
      const double v = row.features->get(name);
      if (v != 0.0) out << format_number(v);
    }
    out << '\n';
  }
}

}  // namespace uptake
