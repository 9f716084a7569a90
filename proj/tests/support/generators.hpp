// Hand-rolled random instance generators for property tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "uptake/corpus.hpp"
#include "uptake/influence.hpp"
#include "uptake/learn.hpp"
#include "uptake/rng.hpp"

namespace uptake::testing {

inline std::string numbered(const char* prefix, std::uint64_t i) { return prefix + std::to_string(i); }

constexpr Timestamp kDay = 86400;

struct MiniCorpus {
  std::vector<Post> posts;
  std::vector<AdoptionEvent> adoptions;
};

/// Up to 5 threads, 20 posts, 10 users, 5 patterns. Timestamps sit on a coarse
/// half-day grid with occasional exact window boundaries so ties and edges occur.
inline MiniCorpus random_mini_corpus(Rng& rng) {
  MiniCorpus mc;
  const auto n_threads = rng.between(1, 5);
  const auto n_posts = rng.between(1, 20);
  const auto n_users = rng.between(1, 10);
  const auto n_patterns = rng.between(1, 5);
  for (std::int64_t i = 0; i < n_posts; ++i) {
    Post p;
    p.post_id = numbered("p", static_cast<std::uint64_t>(rng.below(1000)) * 100 + static_cast<std::uint64_t>(i));
    p.thread_id = numbered("t", rng.below(static_cast<std::uint64_t>(n_threads)));
    p.author = numbered("u", rng.below(static_cast<std::uint64_t>(n_users)));
    p.timestamp = rng.between(0, 40) * (kDay / 2);
    if (rng.bernoulli(0.15)) p.timestamp += 7 * kDay;
    if (rng.bernoulli(0.6)) {
      const auto k = rng.between(1, 2);
      for (std::int64_t j = 0; j < k; ++j) {
        auto pat = numbered("pat", rng.below(static_cast<std::uint64_t>(n_patterns)));
        if (std::find(p.mentioned_patterns.begin(), p.mentioned_patterns.end(), pat) == p.mentioned_patterns.end()) {
          p.mentioned_patterns.push_back(std::move(pat));
        }
      }
    }
    mc.posts.push_back(std::move(p));
  }
  const auto n_events = rng.between(0, 30);
  for (std::int64_t i = 0; i < n_events; ++i) {
    AdoptionEvent e;
    e.user = numbered("u", rng.below(static_cast<std::uint64_t>(n_users)));
    e.pattern = numbered("pat", rng.below(static_cast<std::uint64_t>(n_patterns)));
    e.timestamp = rng.between(0, 50) * (kDay / 2);
    if (rng.bernoulli(0.2) && !mc.posts.empty()) e.timestamp = mc.posts[rng.below(mc.posts.size())].timestamp;
    e.kind = rng.bernoulli(0.5) ? AdoptionKind::Project : AdoptionKind::Queue;
    mc.adoptions.push_back(std::move(e));
  }
  return mc;
}

inline InfluenceConfig random_influence_config(Rng& rng) {
  InfluenceConfig c;
  const Timestamp windows[] = {kDay / 2, 3 * kDay, 7 * kDay, 7 * kDay, 10 * kDay};
  c.window_seconds = windows[rng.below(5)];
  c.include_prior_posters = rng.bernoulli(0.3);
  c.exclude_author = rng.bernoulli(0.8);
  c.exclude_prior_adopters_from_numerator = rng.bernoulli(0.8);
  if (rng.bernoulli(0.3)) c.adoption_horizon_seconds = rng.between(1, 10) * kDay;
  return c;
}

/// Two real features, labels drawn from a logistic model so classes overlap.
inline Dataset random_two_feature_dataset(Rng& rng, std::size_t m) {
  std::vector<std::string> ids;
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
  const double w1 = rng.uniform() * 4 - 2, w2 = rng.uniform() * 4 - 2, b = rng.uniform() - 0.5;
  for (std::size_t i = 0; i < m; ++i) {
    FeatureVector x;
    const double x1 = rng.uniform() * 4 - 2, x2 = rng.uniform() * 4 - 2;
    x.set("f1", x1);
    x.set("f2", x2);
    const double p = 1.0 / (1.0 + std::exp(-(w1 * x1 + w2 * x2 + b)));
    Label y = rng.bernoulli(p) ? Label::Influential : Label::NonInfluential;
    if (i == 0) y = Label::Influential;
    if (i == 1) y = Label::NonInfluential;
    ids.push_back(numbered("d", i));
    rows.push_back(std::move(x));
    labels.push_back(y);
  }
  return Dataset(std::move(ids), std::move(rows), std::move(labels));
}

/// `n_noise` random binary features plus "planted", which equals the label.
inline Dataset planted_feature_dataset(Rng& rng, std::size_t m, std::size_t n_noise) {
  std::vector<std::string> ids;
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < m; ++i) {
    const bool positive = i < 5 || (i >= 10 && rng.bernoulli(0.5));
    FeatureVector x;
    for (std::size_t f = 0; f < n_noise; ++f) {
      char name[16];
      std::snprintf(name, sizeof name, "noise%03zu", f);
      if (rng.bernoulli(0.5)) x.set(name, 1.0);
    }
    if (positive) x.set("planted", 1.0);
    ids.push_back(numbered("r", i));
    rows.push_back(std::move(x));
    labels.push_back(positive ? Label::Influential : Label::NonInfluential);
  }
  return Dataset(std::move(ids), std::move(rows), std::move(labels));
}

}  // namespace uptake::testing
