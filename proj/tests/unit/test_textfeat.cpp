#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <sstream>

#include "uptake/rng.hpp"
#include "uptake/textfeat.hpp"

using namespace uptake;

using Tokens = std::vector<std::string>;

TEST_CASE("tokenize examples") {
  CHECK(tokenize("").tokens.empty());
  CHECK(tokenize("").exclamation_count == 0);

  const auto great = tokenize("Yours look really great! :)");
  CHECK(great.tokens == Tokens{"yours", "look", "really", "great"});
  CHECK(great.exclamation_count == 1);
  CHECK(great.raw_length_chars == 27);

  CHECK(tokenize("It\xE2\x80\x99s really easy going.").tokens == Tokens{"it\xE2\x80\x99s", "really", "easy", "going"});
  CHECK(tokenize("non-gender-specific, (really)!!").tokens == Tokens{"non-gender-specific", "really"});
  CHECK(tokenize("tabs\tand\nnew\xC2\xA0lines").tokens == Tokens{"tabs", "and", "new", "lines"});
  CHECK(tokenize("!!! ... ?!").tokens.empty());
  CHECK(tokenize("!!! ... ?!").exclamation_count == 4);
  CHECK(tokenize("\xE2\x80\x9CQuoted\xE2\x80\x9D").tokens == Tokens{"quoted"});
}

TEST_CASE("property: tokenization is idempotent and keeps no punctuation-only tokens") {
  const std::vector<std::string> pieces{"Hello", "WORLD", "it's", "it\xE2\x80\x99s", "!", "?!", "...", "(x)", "don't!",
                                        "caf\xC3\xA9", "\xE2\x80\x94", ":)", "row-by-row", "\"quoted\"", "  ", "\t", "2x2",
                                        "\xE2\x9D\xA4"};
  Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const auto n = rng.between(0, 12);
    for (std::int64_t i = 0; i < n; ++i) text += rng.pick(pieces) + (rng.bernoulli(0.7) ? " " : "");
    const auto first = tokenize(text);
    std::string joined;
    for (const auto& t : first.tokens) joined += t + " ";
    CHECK(tokenize(joined).tokens == first.tokens);
    CHECK(first.exclamation_count == std::count(text.begin(), text.end(), '!'));
    for (const auto& t : first.tokens) {
      CHECK_FALSE(t.empty());
      CHECK(std::any_of(t.begin(), t.end(), [](char c) { return !std::ispunct(static_cast<unsigned char>(c)); }));
    }
  }
}

TEST_CASE("vocabulary") {
  const std::vector<TokenizedPost> none;
  CHECK(build_vocabulary(none, 1).size() == 0);

  const std::vector<TokenizedPost> posts{tokenize("a b"), tokenize("b c")};
  CHECK(build_vocabulary(posts, 2).tokens() == Tokens{"b"});
  const auto all = build_vocabulary(posts, 1);
  CHECK(all.tokens() == Tokens{"a", "b", "c"});
  CHECK(all.index_of("a") == 0);
  CHECK(all.index_of("b") == 1);
  CHECK(all.index_of("c") == 2);
  CHECK_THROWS_AS(all.index_of("d"), std::out_of_range);

  // document frequency, not term frequency
  const std::vector<TokenizedPost> repeated{tokenize("x x x"), tokenize("y")};
  CHECK(build_vocabulary(repeated, 2).size() == 0);
}

TEST_CASE("unigram features") {
  const std::vector<TokenizedPost> posts{tokenize("great pattern"), tokenize("great pattern")};
  const auto vocab = build_vocabulary(posts, 1);
  CHECK(unigram_features(tokenize(""), vocab).empty());
  const auto fv = unigram_features(tokenize("great great pattern"), vocab);
  CHECK(fv.size() == 2);
  CHECK(fv.get("uni:great") == 1.0);
  CHECK(fv.get("uni:pattern") == 1.0);
  CHECK(unigram_features(tokenize("zzz"), vocab).empty());
}

TEST_CASE("word category features") {
  const auto lists = WordLists::bundled();
  CHECK(word_category_features(tokenize(""), lists).empty());

  const auto cat = word_category_features(tokenize("the cat is on the mat"), lists);
  CHECK(cat.get("wc:article") == 2);
  CHECK(cat.get("wc:tobeverb") == 1);
  CHECK(cat.get("wc:post_length") == 6);
  CHECK(cat.get("wc:pronoun") == 0);

  const auto she = word_category_features(tokenize("she said it is a nice creation"), lists);
  CHECK(she.get("wc:pronoun") == 2);
  CHECK(she.get("wc:article") == 1);
  CHECK(she.get("wc:tobeverb") == 1);
  CHECK(she.get("wc:nominalization") == 1);
  CHECK(she.get("wc:post_length") == 7);

  // "nation" has the suffix but is too short
  CHECK(word_category_features(tokenize("nation"), lists).get("wc:nominalization") == 0);
}

TEST_CASE("property: word-category counts are bounded by the token count") {
  const auto lists = WordLists::bundled();
  const std::vector<std::string> words{"the", "a", "she", "is", "because", "creation", "government", "knit",
                                       "yarn", "wonderful", "extraordinary", "were", "although", "it"};
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const auto n = rng.between(0, 30);
    for (std::int64_t i = 0; i < n; ++i) text += rng.pick(words) + " ";
    const auto post = tokenize(text);
    const auto fv = word_category_features(post, lists);
    CHECK(fv.get("wc:post_length") == static_cast<double>(post.tokens.size()));
    for (const auto& [name, value] : fv) {
      CHECK(value >= 0);
      CHECK(value <= static_cast<double>(post.tokens.size()));
    }
  }
}

TEST_CASE("feature vector drops zeros") {
  FeatureVector fv;
  fv.set("a", 1.5);
  fv.set("b", 0.0);
  CHECK(fv.size() == 1);
  fv.set("a", 0.0);
  CHECK(fv.empty());
  FeatureVector other;
  other.set("c", 2);
  fv.merge(other);
  CHECK(fv.get("c") == 2);
}

TEST_CASE("features csv") {
  FeatureVector x, y;
  x.set("wc:article", 2);
  x.set("uni:great", 1);
  y.set("sent:compound", 0.25);
  const std::vector<FeatureRow> rows{{"p1", "influential", &x}, {"p2", "non_influential", &y}};
  std::ostringstream out;
  write_features_csv(out, rows);
  CHECK(out.str() ==
        "post_id,label,sent:compound,uni:great,wc:article\n"
        "p1,influential,,1,2\n"
        "p2,non_influential,0.25,,\n");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(3) == "3");
}
