#pragma once

#include <map>
#include <set>
#include <string>

#include "uptake/textfeat.hpp"

namespace uptake {

/// Tunable constants of the valence scorer.
struct SentimentConstants {
  double negation_scalar = -0.74;
  int negation_scope = 3;  // tokens scanned before a lexicon hit
  double exclamation_emphasis = 0.292;
  int exclamation_cap = 4;
  double compound_normalizer = 15.0;
};

struct SentimentLexicon {
  std::map<std::string, double, std::less<>> valences;  // each in [-4, 4]
  std::set<std::string, std::less<>> negators;
  std::map<std::string, double, std::less<>> boosters;
  SentimentConstants constants;

  static SentimentLexicon bundled();
  /// Empty paths fall back to the bundled files. Throws MalformedRecord or Error(InvalidConfig).
  static SentimentLexicon from_files(const std::string& lexicon_path, const std::string& negators_path,
                                     const std::string& boosters_path);
  void validate() const;
};

struct SentimentScores {
  double positive = 0.0;
  double negative = 0.0;
  double neutral = 0.0;
  double compound = 0.0;  // in [-1, 1]
};

/// Per-post valence scoring. A token that is itself in the lexicon is scored
/// as a lexicon hit and never acts as a negator.
SentimentScores score(const TokenizedPost& post, const SentimentLexicon& lexicon);

/// sent:positive, sent:negative, sent:neutral, sent:compound (zeros omitted).
FeatureVector sentiment_features(const SentimentScores& scores);

}  // namespace uptake
