#include "uptake/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <tuple>

#include "uptake/error.hpp"
#include "uptake/influence.hpp"
#include "uptake/jsonl.hpp"
#include "uptake/rng.hpp"
#include "uptake/sentiment.hpp"
#include "uptake/wordlist.hpp"

namespace uptake {

void SynthConfig::validate() const {
  if (n_threads < 1 || posts_per_thread < 1 || n_users < 1 || n_patterns < 1 || target_posts < 1) {
    throw Error(ErrorCode::InvalidConfig, "all synthetic corpus counts must be >= 1");
  }
  if (!(cue_strength >= 0.0 && cue_strength <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "cue_strength must be in [0, 1]");
  }
  if (static_cast<long long>(n_threads) * posts_per_thread < target_posts) {
    throw Error(ErrorCode::InvalidConfig, "target_posts exceeds n_threads * posts_per_thread");
  }
}

namespace {

constexpr Timestamp kEpochStart = 1420070400;  // 2015-01-01T00:00:00Z
constexpr Timestamp kDay = 24 * 3600;
constexpr double kMeanReplyGapSeconds = 16.0 * 3600;
constexpr double kBaseInfluenceRate = 0.1;
constexpr double kCueRate = 0.2;           // per cue, independently
constexpr double kRealizationRate = 0.65;  // a true cue shows up as a lexicon phrase
constexpr double kDecoyRate = 0.12;        // an absent cue's phrase shows up anyway
constexpr double kSecondPatternRate = 0.1;

std::string numbered(const char* prefix, int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, value);
  return buf;
}

struct TextSources {
  std::vector<std::string> filler;
  std::vector<std::string> positive_words;
  std::vector<std::string> qualifier_phrases;
  std::vector<std::string> modification_markers;

  static TextSources bundled() {
    TextSources s;
    for (const auto& line : parse_word_list(bundled_text("synth_filler.txt"))) s.filler.push_back(line);
    const auto lexicon = SentimentLexicon::bundled();
    for (const auto& [token, valence] : lexicon.valences) {
      if (valence >= 2.0 && token.find('-') == std::string::npos) s.positive_words.push_back(token);
    }
    const auto cues = CueLexicons::bundled();
    s.qualifier_phrases.assign(cues.qualifier_phrases.begin(), cues.qualifier_phrases.end());
    s.modification_markers.assign(cues.modification_markers.begin(), cues.modification_markers.end());
    return s;
  }
};

std::string enthusiasm_sentence(Rng& rng, const TextSources& src) {
  static const std::vector<std::string> frames{"it looks really {}!", "so {}!", "the result is {}!",
                                               "i am thrilled, it came out {}!", "{} pattern, {} yarn!"};
  std::string s = rng.pick(frames);
  for (auto pos = s.find("{}"); pos != std::string::npos; pos = s.find("{}")) {
    s.replace(pos, 2, rng.pick(src.positive_words));
  }
  return s;
}

std::string enthusiasm_decoy(Rng& rng, const TextSources& src) {
  return rng.pick(src.positive_words) + " to see you all at the meeting!";
}

std::string phrase_sentence(Rng& rng, const std::vector<std::string>& phrases) {
  static const std::vector<std::string> frames{"{}.", "i would say {}.", "notes: {}.", "{}, as the photo shows."};
  std::string s = rng.pick(frames);
  s.replace(s.find("{}"), 2, rng.pick(phrases));
  return s;
}

std::string phrase_decoy(Rng& rng, const std::vector<std::string>& phrases) {
  return "someone asked whether it was " + rng.pick(phrases) + " but i cannot say.";
}

struct Slot {
  int thread;
  int position;
};

struct DraftPost {
  Post post;
  bool mentions = false;
  MeqLabel cues;
  std::vector<std::string> cue_sentences;
  std::vector<std::string> filler;
};

std::string compose_text(const DraftPost& d) {
  std::string text;
  auto append = [&](const std::string& sentence) {
    if (!text.empty()) text += ' ';
    text += sentence;
  };
  for (std::size_t i = 0; i < d.filler.size(); ++i) {
    append(d.filler[i] + ".");
    if (i == 0 && d.mentions) {
      std::string mention = "pattern:";
      for (const auto& p : d.post.mentioned_patterns) mention += " " + p;
      append(mention);
    }
  }
  for (const auto& s : d.cue_sentences) append(s);
  return text;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const TextSources src = TextSources::bundled();

  std::vector<std::string> users, patterns;
  for (int u = 1; u <= config.n_users; ++u) users.push_back(numbered("u", u, 4));
  for (int p = 1; p <= config.n_patterns; ++p) patterns.push_back(numbered("pat", p, 4));

  // Thread timelines.
  std::vector<DraftPost> drafts;
  int next_post = 1;
  for (int t = 0; t < config.n_threads; ++t) {
    Timestamp clock = kEpochStart + rng.between(0, 365 * kDay);
    for (int k = 0; k < config.posts_per_thread; ++k) {
      if (k > 0) {
        const double gap = -std::log(1.0 - rng.uniform()) * kMeanReplyGapSeconds;
        clock += std::max<Timestamp>(60, std::llround(gap));
      }
      DraftPost d;
      d.post.post_id = numbered("p", next_post++, 6);
      d.post.thread_id = numbered("t", t + 1, 4);
      d.post.author = rng.pick(users);
      d.post.timestamp = clock;
      const int n_filler = static_cast<int>(rng.between(1, 3));
      for (int s = 0; s < n_filler; ++s) d.filler.push_back(rng.pick(src.filler));
      drafts.push_back(std::move(d));
    }
  }

  // Mention slots: prefer posts that have a successor in their thread.
  std::vector<std::size_t> inner, last;
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const bool is_last = (i + 1) % config.posts_per_thread == 0;
    (is_last ? last : inner).push_back(i);
  }
  rng.shuffle(inner);
  rng.shuffle(last);
  std::vector<std::size_t> mention_slots = inner;
  mention_slots.insert(mention_slots.end(), last.begin(), last.end());
  mention_slots.resize(config.target_posts);
  std::sort(mention_slots.begin(), mention_slots.end());

  for (std::size_t i : mention_slots) {
    DraftPost& d = drafts[i];
    d.mentions = true;
    d.post.mentioned_patterns.push_back(rng.pick(patterns));
    if (rng.bernoulli(kSecondPatternRate)) {
      const auto& second = rng.pick(patterns);
      if (second != d.post.mentioned_patterns.front()) d.post.mentioned_patterns.push_back(second);
    }
    d.cues.enthusiasm = rng.bernoulli(kCueRate);
    d.cues.qualifier = rng.bernoulli(kCueRate);
    d.cues.modification = rng.bernoulli(kCueRate);
  }

  for (auto& d : drafts) {
    if (d.cues.enthusiasm) {
      if (rng.bernoulli(kRealizationRate)) d.cue_sentences.push_back(enthusiasm_sentence(rng, src));
    } else if (rng.bernoulli(kDecoyRate)) {
      d.cue_sentences.push_back(enthusiasm_decoy(rng, src));
    }
    if (d.cues.qualifier) {
      if (rng.bernoulli(kRealizationRate)) d.cue_sentences.push_back(phrase_sentence(rng, src.qualifier_phrases));
    } else if (rng.bernoulli(kDecoyRate)) {
      d.cue_sentences.push_back(phrase_decoy(rng, src.qualifier_phrases));
    }
    if (d.cues.modification) {
      if (rng.bernoulli(kRealizationRate)) d.cue_sentences.push_back(phrase_sentence(rng, src.modification_markers));
    } else if (rng.bernoulli(kDecoyRate)) {
      d.cue_sentences.push_back(phrase_decoy(rng, src.modification_markers));
    }
  }

  // Background adoptions unrelated to any post.
  std::vector<AdoptionEvent> adoptions;
  for (int i = 0; i < config.n_users; ++i) {
    AdoptionEvent e;
    e.user = rng.pick(users);
    e.pattern = rng.pick(patterns);
    e.timestamp = kEpochStart + rng.between(-30 * kDay, 400 * kDay);
    e.kind = rng.bernoulli(0.5) ? AdoptionKind::Project : AdoptionKind::Queue;
    adoptions.push_back(std::move(e));
  }
  std::map<std::pair<std::string, std::string>, std::vector<Timestamp>> known;
  for (const auto& e : adoptions) known[{e.user, e.pattern}].push_back(e.timestamp);

  // Exposure depends only on thread timelines, so it can be computed before texts exist.
  std::vector<Post> skeleton;
  for (const auto& d : drafts) skeleton.push_back(d.post);
  const Corpus timeline = Corpus::assemble(std::move(skeleton), {});
  const InfluenceConfig influence;

  std::vector<std::size_t> by_time(mention_slots);
  std::sort(by_time.begin(), by_time.end(),
            [&](std::size_t a, std::size_t b) { return post_precedes(drafts[a].post, drafts[b].post); });

  for (std::size_t i : by_time) {
    DraftPost& d = drafts[i];
    const double p_influential =
        d.cues.any() ? kBaseInfluenceRate + config.cue_strength * (1.0 - kBaseInfluenceRate) : kBaseInfluenceRate;
    const bool influential = rng.bernoulli(p_influential);
    if (!influential) continue;

    const auto& thread = timeline.threads().at(d.post.thread_id);
    const auto pos = static_cast<std::size_t>(
        std::find_if(thread.posts.begin(), thread.posts.end(),
                     [&](const Post& p) { return p.post_id == d.post.post_id; }) -
        thread.posts.begin());
    const auto exposed = compute_exposure(thread, pos, influence).exposed_users;
    if (exposed.empty()) continue;

    // Users with no adoption of the pattern at or before the post. Adoptions
    // planted later are always after this post, so eligibility is final.
    auto eligible_for = [&](const std::string& pattern) {
      std::vector<std::string> out;
      for (const auto& user : exposed) {
        auto it = known.find({user, pattern});
        const bool prior = it != known.end() &&
                           std::any_of(it->second.begin(), it->second.end(),
                                       [&](Timestamp ts) { return ts <= d.post.timestamp; });
        if (!prior) out.push_back(user);
      }
      return out;
    };
    std::string& pattern = d.post.mentioned_patterns.front();
    auto eligible = eligible_for(pattern);
    if (eligible.empty()) {
      const auto start = static_cast<std::size_t>(std::find(patterns.begin(), patterns.end(), pattern) - patterns.begin());
      for (std::size_t step = 1; step < patterns.size() && eligible.empty(); ++step) {
        const auto& candidate = patterns[(start + step) % patterns.size()];
        if (std::find(d.post.mentioned_patterns.begin(), d.post.mentioned_patterns.end(), candidate) !=
            d.post.mentioned_patterns.end()) {
          continue;
        }
        eligible = eligible_for(candidate);
        if (!eligible.empty()) pattern = candidate;
      }
    }
    if (eligible.empty()) continue;

    rng.shuffle(eligible);
    const std::size_t n_adopters = std::min<std::size_t>(eligible.size(), rng.bernoulli(0.3) ? 2 : 1);
    for (std::size_t a = 0; a < n_adopters; ++a) {
      AdoptionEvent e;
      e.user = eligible[a];
      e.pattern = pattern;
      e.timestamp = d.post.timestamp + rng.between(3600, 30 * kDay);
      e.kind = rng.bernoulli(0.5) ? AdoptionKind::Project : AdoptionKind::Queue;
      known[{e.user, e.pattern}].push_back(e.timestamp);
      adoptions.push_back(std::move(e));
    }
  }

  std::sort(adoptions.begin(), adoptions.end(), [](const AdoptionEvent& a, const AdoptionEvent& b) {
    return std::tie(a.timestamp, a.user, a.pattern, a.kind) < std::tie(b.timestamp, b.user, b.pattern, b.kind);
  });

  SyntheticCorpus out;
  std::vector<Post> posts;
  for (auto& d : drafts) {
    d.post.text = compose_text(d);
    if (d.mentions) out.ground_truth.emplace(d.post.post_id, d.cues);
    posts.push_back(std::move(d.post));
  }
  out.corpus = Corpus::assemble(std::move(posts), std::move(adoptions));
  return out;
}

void write_ground_truth_jsonl(std::ostream& out, const std::map<std::string, MeqLabel>& truth) {
  for (const auto& [post_id, label] : truth) {
    jsonl::OrderedJson obj;
    obj["post_id"] = post_id;
    obj["E"] = label.enthusiasm;
    obj["Q"] = label.qualifier;
    obj["M"] = label.modification;
    out << obj.dump() << '\n';
  }
}

}  // namespace uptake
