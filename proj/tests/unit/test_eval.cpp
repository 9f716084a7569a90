#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "uptake/error.hpp"
#include "uptake/eval.hpp"
#include "uptake/jsonl.hpp"

using namespace uptake;

constexpr Label P = Label::Influential;
constexpr Label N = Label::NonInfluential;

TEST_CASE("confusion examples") {
  const std::vector<Label> gold{P, N}, pred{P, N};
  CHECK(confusion(gold, pred) == ConfusionMatrix{1, 0, 0, 1});
  const std::vector<Label> pp{P, P}, nn{N, N};
  CHECK(confusion(pp, nn) == ConfusionMatrix{0, 0, 2, 0});
  const std::vector<Label> one{P};
  CHECK_THROWS_AS(confusion(one, pp), Error);
  CHECK_THROWS_AS(confusion(std::vector<Label>{}, std::vector<Label>{}), Error);
}

TEST_CASE("property: confusion matches a pair count") {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Label> g, p;
    std::int64_t counts[2][2] = {};
    for (int i = 0; i < 100; ++i) {
      g.push_back(rng.bernoulli(0.5) ? P : N);
      p.push_back(rng.bernoulli(0.5) ? P : N);
      counts[g.back() == P][p.back() == P]++;
    }
    const auto cm = confusion(g, p);
    CHECK(cm.tn == counts[0][0]);
    CHECK(cm.fp == counts[0][1]);
    CHECK(cm.fn == counts[1][0]);
    CHECK(cm.tp == counts[1][1]);
  }
}

TEST_CASE("metric examples") {
  const ConfusionMatrix base{253, 107, 112, 228};
  CHECK(round_half_up(accuracy(base), 2) == 68.71);
  // 456/675 = 67.5555...; the published 67.55 agrees through two decimals
  CHECK(std::floor(f_positive(base) * 100) / 100 == doctest::Approx(67.55));
  CHECK(round_half_up(f_positive(base), 2) == 67.56);
  CHECK(round_half_up(kappa(base), 4) == 0.3735);

  CHECK(accuracy({1, 0, 0, 1}) == 100.0);
  CHECK(f_positive({0, 0, 0, 5}) == 100.0);

  const ConfusionMatrix best{267, 93, 103, 237};
  CHECK(round_half_up(accuracy(best), 2) == 72.00);
  CHECK(round_half_up(f_positive(best), 2) == 70.75);

  CHECK_THROWS_AS(accuracy({}), Error);
  CHECK_THROWS_AS(kappa({}), Error);
  CHECK(f_positive({5, 0, 0, 0}) == 0.0);
  CHECK(f_positive_is_degenerate({5, 0, 0, 0}));
  CHECK_FALSE(f_positive_is_degenerate(base));
}

TEST_CASE("property: F ignores true negatives, accuracy does not") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    ConfusionMatrix cm{rng.between(0, 50), rng.between(0, 50), rng.between(0, 50), rng.between(1, 50)};
    ConfusionMatrix more = cm;
    more.tn += rng.between(1, 50);
    CHECK(f_positive(more) == f_positive(cm));
    CHECK(accuracy(more) > accuracy(cm));
  }
}

TEST_CASE("cohens kappa") {
  const std::vector<int> a{1, 0, 1, 0, 1}, b{1, 0, 0, 0, 1};
  CHECK(cohens_kappa(a, a) == 1.0);
  CHECK(cohens_kappa(a, b) == doctest::Approx(0.32 / 0.52));
  CHECK(round_half_up(cohens_kappa(a, b), 4) == 0.6154);
  const std::vector<int> constant{1, 1, 1};
  CHECK(cohens_kappa(constant, constant) == 1.0);
  CHECK_THROWS_AS(cohens_kappa(a, constant), Error);

  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> x, y;
    const auto n = rng.between(1, 40);
    const auto k = rng.between(1, 4);
    for (std::int64_t i = 0; i < n; ++i) {
      x.push_back(static_cast<int>(rng.below(k)));
      y.push_back(rng.bernoulli(0.6) ? x.back() : static_cast<int>(rng.below(k)));
    }
    CHECK(cohens_kappa(x, y) == doctest::Approx(testing::oracle_kappa(x, y)).epsilon(1e-12));
    CHECK(cohens_kappa(x, y) == cohens_kappa(y, x));
    CHECK(cohens_kappa(x, x) == 1.0);
  }

  // binary kappa from a matrix equals the label-sequence form
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> g, p;
    std::vector<Label> gl, pl;
    for (int i = 0; i < 50; ++i) {
      g.push_back(rng.bernoulli(0.4));
      p.push_back(rng.bernoulli(0.5) ? g.back() : rng.bernoulli(0.5));
      gl.push_back(g.back() ? P : N);
      pl.push_back(p.back() ? P : N);
    }
    CHECK(kappa(confusion(gl, pl)) == doctest::Approx(cohens_kappa(g, p)).epsilon(1e-12));
  }
}

TEST_CASE("rounding") {
  CHECK(round_half_up(0.37352, 4) == 0.3735);
  CHECK(round_half_up(2.675, 2) == 2.68);
  CHECK(round_half_up(-2.675, 2) == -2.68);
  CHECK(round_half_up(68.7142857, 2) == 68.71);
}

TEST_CASE("weight report") {
  ModelParams m;
  m.weights = {{"a", 0.5}, {"b", -1.1}};
  const auto two = weight_report(m, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].first == "b");
  CHECK(two[1].first == "a");
  CHECK(weight_report(m, 10).size() == 2);
  CHECK(weight_report(m, 0).empty());

  ModelParams tie;
  tie.weights = {{"z", 1.0}, {"m", -1.0}, {"a", 1.0}};
  const auto ordered = weight_report(tie, 3);
  CHECK(ordered[0].first == "a");
  CHECK(ordered[1].first == "m");
  CHECK(ordered[2].first == "z");

  const auto text = render_weight_report({{"uni:great", 0.4}, {"meq:E", 1.2}, {"wc:article", -0.3}});
  CHECK(text ==
        "MEQ and derived features\n  E\t1.2000\n"
        "Word category-based features\n  article\t-0.3000\n"
        "Unigram features\n  great\t0.4000\n");
}

TEST_CASE("report json") {
  const EvalReport report({253, 107, 112, 228}, {{"meq:E", 1.25}});
  const std::vector<std::string> sets{"unigram"};
  const auto json = jsonl::Json::parse(report_to_json(report, sets, 5, 13));
  CHECK(json["accuracy"] == 68.71);
  CHECK(json["kappa"] == 0.3735);
  CHECK(json["f_positive"] == 67.56);
  CHECK(json["confusion"]["tn"] == 253);
  CHECK(json["weights"][0]["name"] == "meq:E");
  CHECK(json["featuresets"][0] == "unigram");
  CHECK(json["folds"] == 5);
  CHECK(json["seed"] == 13);
  CHECK(json.size() == 8);
}

TEST_CASE("annotator agreement") {
  std::vector<MeqAnnotation> anns;
  const bool ea[] = {true, false, true, false, true}, eb[] = {true, false, false, false, true};
  for (int i = 0; i < 5; ++i) {
    const std::string id = "p" + std::to_string(i);
    anns.push_back({id, "a", {ea[i], true, false}, i});
    anns.push_back({id, "b", {eb[i], true, false}, i});
  }
  anns.push_back({"only_a", "a", {true, true, true}, 9});
  anns.push_back({"p0", "a", {false, false, true}, 99});  // later duplicate is ignored
  const auto r = agreement(anns, "a", "b");
  CHECK(r.overlap_size == 5);
  CHECK(round_half_up(r.enthusiasm, 4) == 0.6154);
  CHECK(r.qualifier == 1.0);
  CHECK(r.modification == 1.0);
  CHECK(agreement(anns, "b", "a").enthusiasm == r.enthusiasm);

  const auto json = jsonl::Json::parse(agreement_to_json(r));
  CHECK(json["overlap_size"] == 5);
  CHECK(json["kappa"]["enthusiasm"].get<double>() == r.enthusiasm);

  const std::vector<MeqAnnotation> disjoint{{"p1", "a", {}, 0}, {"p2", "b", {}, 0}};
  try {
    agreement(disjoint, "a", "b");
    FAIL("expected NoOverlap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoOverlap);
  }
}
