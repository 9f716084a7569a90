#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "uptake/corpus.hpp"
#include "uptake/meq.hpp"

namespace uptake {

struct SynthConfig {
  std::uint64_t seed = 1;
  int n_threads = 100;
  int posts_per_thread = 14;
  int n_users = 300;
  int n_patterns = 400;
  /// Extra probability, in [0, 1], that a cue-bearing post gains adopters.
  double cue_strength = 0.5;
  /// Number of pattern-mentioning posts.
  int target_posts = 700;

  /// Throws Error(InvalidConfig).
  void validate() const;
};

struct SyntheticCorpus {
  Corpus corpus;
  std::map<std::string, MeqLabel> ground_truth;  // planted cues of every pattern-mentioning post
};

/// Deterministic in `config`. Cue-bearing posts become influential with
/// probability base + cue_strength * (1 - base), others with the base rate;
/// cue phrases from the bundled lexicons are written into their text.
SyntheticCorpus generate_synthetic(const SynthConfig& config);

/// ground_truth.jsonl: {"post_id", "E", "Q", "M"} in post_id order.
void write_ground_truth_jsonl(std::ostream& out, const std::map<std::string, MeqLabel>& truth);

}  // namespace uptake
