#include "uptake/sentiment.hpp"

#include <algorithm>
#include <cmath>

#include "uptake/error.hpp"
#include "uptake/wordlist.hpp"

namespace uptake {

SentimentLexicon SentimentLexicon::from_files(const std::string& lexicon_path, const std::string& negators_path,
                                              const std::string& boosters_path) {
  SentimentLexicon lex;
  for (auto& [token, v] : parse_weighted_list(text_or_bundled(lexicon_path, "sentiment_lexicon.tsv"),
                                              lexicon_path.empty() ? "sentiment_lexicon.tsv" : lexicon_path)) {
    lex.valences.emplace(token, v);
  }
  for (auto& token : parse_word_list(text_or_bundled(negators_path, "negators.txt"))) lex.negators.insert(token);
  for (auto& [token, inc] : parse_weighted_list(text_or_bundled(boosters_path, "boosters.tsv"),
                                                boosters_path.empty() ? "boosters.tsv" : boosters_path)) {
    lex.boosters.emplace(token, inc);
  }
  lex.validate();
  return lex;
}

SentimentLexicon SentimentLexicon::bundled() { return from_files("", "", ""); }

void SentimentLexicon::validate() const {
  for (const auto& [token, v] : valences) {
    if (!(v >= -4.0 && v <= 4.0)) {
      throw Error(ErrorCode::InvalidConfig, "valence of '" + token + "' outside [-4, 4]");
    }
  }
  if (constants.compound_normalizer <= 0.0) throw Error(ErrorCode::InvalidConfig, "compound normalizer must be > 0");
  if (constants.negation_scope < 0 || constants.exclamation_cap < 0) {
    throw Error(ErrorCode::InvalidConfig, "negative negation scope or exclamation cap");
  }
}

SentimentScores score(const TokenizedPost& post, const SentimentLexicon& lexicon) {
  const auto& k = lexicon.constants;
  const auto& tokens = post.tokens;
  auto is_negator = [&](const std::string& t) {
    return lexicon.negators.count(t) > 0 && lexicon.valences.find(t) == lexicon.valences.end();
  };

  double sum = 0.0, positive_mass = 0.0, negative_mass = 0.0;
  std::size_t neutral_count = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    double v = 0.0;
    if (auto it = lexicon.valences.find(tokens[i]); it != lexicon.valences.end()) {
      v = it->second;
      const std::size_t scope_begin = i > static_cast<std::size_t>(k.negation_scope) ? i - k.negation_scope : 0;
      for (std::size_t j = scope_begin; j < i; ++j) {
        if (is_negator(tokens[j])) {
          v *= k.negation_scalar;
          break;
        }
      }
      if (i > 0) {
        if (auto b = lexicon.boosters.find(tokens[i - 1]); b != lexicon.boosters.end() && v != 0.0) {
          v = std::copysign(std::max(0.0, std::abs(v) + b->second), v);
        }
      }
    }
    sum += v;
    if (v > 0) positive_mass += v;
    if (v < 0) negative_mass += -v;
    if (v == 0) ++neutral_count;
  }

  SentimentScores out;
  if (sum != 0.0) {
    const double marks = std::min(post.exclamation_count, k.exclamation_cap);
    sum += (sum > 0 ? 1.0 : -1.0) * k.exclamation_emphasis * marks;
  }
  out.compound = sum / std::sqrt(sum * sum + k.compound_normalizer);
  const double denom = positive_mass + negative_mass + static_cast<double>(neutral_count);
  if (denom > 0) {
    out.positive = positive_mass / denom;
    out.negative = negative_mass / denom;
    out.neutral = static_cast<double>(neutral_count) / denom;
  }
  return out;
}

FeatureVector sentiment_features(const SentimentScores& scores) {
  FeatureVector out;
  out.set("sent:positive", scores.positive);
  out.set("sent:negative", scores.negative);
  out.set("sent:neutral", scores.neutral);
  out.set("sent:compound", scores.compound);
  return out;
}

}  // namespace uptake
