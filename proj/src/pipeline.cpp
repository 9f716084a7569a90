#include "uptake/pipeline.hpp"

#include "uptake/error.hpp"
#include "uptake/wordlist.hpp"

namespace uptake {

Resources Resources::bundled() { return load(ResourcePaths{}); }

Resources Resources::load(const ResourcePaths& paths) {
  Resources r;
  auto& w = r.word_lists;
  w.pronouns = parse_word_list(text_or_bundled(paths.pronouns, "pronouns.txt"));
  w.articles = parse_word_list(text_or_bundled(paths.articles, "articles.txt"));
  w.tobeverbs = parse_word_list(text_or_bundled(paths.tobeverbs, "tobeverbs.txt"));
  w.subordinators = parse_word_list(text_or_bundled(paths.subordinators, "subordinators.txt"));
  w.easy_words = parse_word_list(text_or_bundled(paths.easy_words, "easy_words.txt"));
  w.nominalization_suffixes =
      parse_word_list(text_or_bundled(paths.nominalization_suffixes, "nominalization_suffixes.txt"));
  w.validate();
  r.lexicon = SentimentLexicon::from_files(paths.sentiment_lexicon, paths.negators, paths.boosters);
  r.cues = CueLexicons::from_files(paths.qualifier_phrases, paths.modification_markers);
  return r;
}

std::vector<Example> build_examples(const Corpus& corpus, std::span<const LabeledPost> labeled,
                                    const std::map<std::string, MeqLabel>& meq_labels, const Resources& resources) {
  std::vector<Example> out;
  out.reserve(labeled.size());
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    const auto& lp = labeled[i];
    const Post* post = corpus.find_post(lp.post_id);
    if (!post) throw MalformedRecord("labeled.jsonl", i + 1, "post " + lp.post_id + " not found in corpus");
    Example e;
    e.post_id = lp.post_id;
    e.label = lp.label;
    e.tokens = tokenize(post->text);
    e.word_category = word_category_features(e.tokens, resources.word_lists);
    e.sentiment = sentiment_features(score(e.tokens, resources.lexicon));
    if (auto it = meq_labels.find(lp.post_id); it != meq_labels.end()) e.meq = interaction_features(it->second);
    out.push_back(std::move(e));
  }
  return out;
}

Dataset build_dataset(std::span<const Example> examples, const FeatureSetSpec& spec, const Vocabulary* vocab) {
  std::vector<std::string> ids;
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
  for (const auto& e : examples) {
    ids.push_back(e.post_id);
    rows.push_back(featurize(e, spec, vocab));
    labels.push_back(e.label);
  }
  return Dataset(std::move(ids), std::move(rows), std::move(labels));
}

std::vector<std::string> post_ids_of(std::span<const Example> examples) {
  std::vector<std::string> out;
  for (const auto& e : examples) out.push_back(e.post_id);
  return out;
}

std::vector<Label> labels_of(std::span<const Example> examples) {
  std::vector<Label> out;
  for (const auto& e : examples) out.push_back(e.label);
  return out;
}

}  // namespace uptake
