#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "uptake/corpus.hpp"
#include "uptake/influence.hpp"
#include "uptake/learn.hpp"
#include "uptake/meq.hpp"
#include "uptake/sentiment.hpp"
#include "uptake/textfeat.hpp"

namespace uptake {

/// File overrides for the bundled data. Empty paths use the bundled copy.
struct ResourcePaths {
  std::string pronouns, articles, tobeverbs, subordinators, easy_words, nominalization_suffixes;
  std::string sentiment_lexicon, negators, boosters;
  std::string qualifier_phrases, modification_markers;
};

struct Resources {
  WordLists word_lists;
  SentimentLexicon lexicon;
  CueLexicons cues;

  static Resources bundled();
  static Resources load(const ResourcePaths& paths);
};

/// One Example per labeled post found in the corpus. Posts without an MEQ
/// label get empty MEQ features. Throws Error(MalformedRecord) if a labeled
/// post is missing from the corpus.
std::vector<Example> build_examples(const Corpus& corpus, std::span<const LabeledPost> labeled,
                                    const std::map<std::string, MeqLabel>& meq_labels, const Resources& resources);

/// All features of an example under the given sets, using `vocab` for unigrams.
Dataset build_dataset(std::span<const Example> examples, const FeatureSetSpec& spec, const Vocabulary* vocab);

std::vector<std::string> post_ids_of(std::span<const Example> examples);
std::vector<Label> labels_of(std::span<const Example> examples);

}  // namespace uptake
