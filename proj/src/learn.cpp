#include "uptake/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include "uptake/error.hpp"

namespace uptake {

// ---------------------------------------------------------------- Dataset

Dataset::Dataset(std::vector<std::string> post_ids, std::vector<FeatureVector> rows, std::vector<Label> labels)
    : post_ids_(std::move(post_ids)), rows_(std::move(rows)) {
  if (post_ids_.size() != rows_.size() || rows_.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "dataset ids, rows and labels differ in length");
  }
  labels_.reserve(labels.size());
  for (Label l : labels) labels_.push_back(to_sign(l));
  std::set<std::string_view> names;
  for (const auto& row : rows_) {
    for (const auto& [name, value] : row) names.insert(name);
  }
  std::size_t col = 0;
  for (auto name : names) feature_index_.emplace(std::string(name), col++);
}

Dataset Dataset::subset(std::span<const std::size_t> row_indices) const {
  std::vector<std::string> ids;
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
  for (std::size_t i : row_indices) {
    ids.push_back(post_ids_.at(i));
    rows.push_back(rows_.at(i));
    labels.push_back(label(i));
  }
  return Dataset(std::move(ids), std::move(rows), std::move(labels));
}

Dataset Dataset::restrict_features(std::span<const std::string> names) const {
  std::vector<FeatureVector> rows;
  rows.reserve(rows_.size());
  for (const auto& row : rows_) {
    FeatureVector kept;
    for (const auto& name : names) kept.set(name, row.get(name));
    rows.push_back(std::move(kept));
  }
  std::vector<Label> labels;
  for (std::size_t i = 0; i < size(); ++i) labels.push_back(label(i));
  return Dataset(post_ids_, std::move(rows), std::move(labels));
}

// ---------------------------------------------------------------- training

void TrainConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidConfig, "lambda must be >= 0");
  if (max_iterations < 1) throw Error(ErrorCode::InvalidConfig, "max_iterations must be >= 1");
  if (!(gradient_tolerance > 0.0)) throw Error(ErrorCode::InvalidConfig, "gradient_tolerance must be > 0");
}

namespace {

struct Entry {
  std::uint32_t col;
  double value;
};

struct SparseProblem {
  std::vector<std::vector<Entry>> rows;
  std::vector<double> y;
  std::size_t n_features = 0;
  double lambda = 0.0;
};

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

SparseProblem to_sparse(const Dataset& data, double lambda) {
  SparseProblem p;
  p.n_features = data.feature_index().size();
  p.lambda = lambda;
  p.rows.resize(data.size());
  p.y.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    p.y[i] = data.labels()[i];
    for (const auto& [name, value] : data.rows()[i]) {
      if (!std::isfinite(value)) {
        throw Error(ErrorCode::NonFiniteFeature, "feature " + name + " of " + data.post_ids()[i] + " is not finite");
      }
      p.rows[i].push_back({static_cast<std::uint32_t>(data.feature_index().find(name)->second), value});
    }
  }
  return p;
}

std::vector<double> margins(const SparseProblem& p, const std::vector<double>& w, double b) {
  std::vector<double> z(p.rows.size(), b);
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    for (const auto& e : p.rows[i]) z[i] += w[e.col] * e.value;
  }
  return z;
}

double objective_at(const SparseProblem& p, const std::vector<double>& z, const std::vector<double>& w) {
  double loss = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) loss += softplus(-p.y[i] * z[i]);
  loss /= static_cast<double>(z.size());
  double sq = 0.0;
  for (double wj : w) sq += wj * wj;
  return loss + 0.5 * p.lambda * sq;
}

// Gradient w.r.t. (w, b); returns b's component.
double gradient(const SparseProblem& p, const std::vector<double>& z, const std::vector<double>& w,
                std::vector<double>& grad_w) {
  const double inv_m = 1.0 / static_cast<double>(z.size());
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  double grad_b = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double coef = -p.y[i] * sigmoid(-p.y[i] * z[i]) * inv_m;
    grad_b += coef;
    for (const auto& e : p.rows[i]) grad_w[e.col] += coef * e.value;
  }
  for (std::size_t j = 0; j < w.size(); ++j) grad_w[j] += p.lambda * w[j];
  return grad_b;
}

}  // namespace

ModelParams train(const Dataset& data, const TrainConfig& config, TrainTrace* trace) {
  config.validate();
  const bool has_pos = std::find(data.labels().begin(), data.labels().end(), 1) != data.labels().end();
  const bool has_neg = std::find(data.labels().begin(), data.labels().end(), -1) != data.labels().end();
  if (!has_pos || !has_neg) throw Error(ErrorCode::SingleClassData, "training data must contain both classes");

  const SparseProblem p = to_sparse(data, config.lambda);
  std::vector<double> w(p.n_features, 0.0), grad_w(p.n_features, 0.0), w_trial(p.n_features);
  double b = 0.0;
  std::vector<double> z = margins(p, w, b);
  double J = objective_at(p, z, w);

  TrainTrace local;
  local.objective.push_back(J);
  double step = 1.0;
  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-20;

  std::vector<double> dz(z.size()), z_trial(z.size());
  for (;;) {
    const double grad_b = gradient(p, z, w, grad_w);
    double inf_norm = std::abs(grad_b), sq_norm = grad_b * grad_b;
    for (double g : grad_w) {
      inf_norm = std::max(inf_norm, std::abs(g));
      sq_norm += g * g;
    }
    local.gradient_inf_norm = inf_norm;
    if (inf_norm < config.gradient_tolerance) {
      local.converged = true;
      break;
    }
    if (local.iterations >= config.max_iterations) break;

    // Margin change along the descent direction -grad.
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
      double d = -grad_b;
      for (const auto& e : p.rows[i]) d -= grad_w[e.col] * e.value;
      dz[i] = d;
    }
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    while (step >= kMinStep) {
      for (std::size_t j = 0; j < w.size(); ++j) w_trial[j] = w[j] - step * grad_w[j];
      for (std::size_t i = 0; i < z.size(); ++i) z_trial[i] = z[i] + step * dz[i];
      const double J_trial = objective_at(p, z_trial, w_trial);
      if (J_trial <= J - kArmijo * step * sq_norm) {
        w.swap(w_trial);
        z.swap(z_trial);
        b -= step * grad_b;
        J = J_trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no representable decrease left
    ++local.iterations;
    local.objective.push_back(J);
  }

  ModelParams model;
  model.bias = b;
  model.lambda = config.lambda;
  for (const auto& [name, col] : data.feature_index()) model.weights.emplace(name, w[col]);
  if (trace) *trace = std::move(local);
  return model;
}

double objective(const Dataset& data, const ModelParams& model) {
  SparseProblem p = to_sparse(data, model.lambda);
  std::vector<double> w(p.n_features, 0.0);
  for (const auto& [name, col] : data.feature_index()) {
    if (auto it = model.weights.find(name); it != model.weights.end()) w[col] = it->second;
  }
  // Weights for features absent from the data still pay the penalty.
  double extra = 0.0;
  for (const auto& [name, wj] : model.weights) {
    if (data.feature_index().find(name) == data.feature_index().end()) extra += wj * wj;
  }
  return objective_at(p, margins(p, w, model.bias), w) + 0.5 * model.lambda * extra;
}

double predict_prob(const ModelParams& model, const FeatureVector& x) {
  double z = model.bias;
  for (const auto& [name, value] : x) {
    if (auto it = model.weights.find(name); it != model.weights.end()) z += it->second * value;
  }
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  const double hi = std::nextafter(1.0, 0.0);
  return std::clamp(sigmoid(z), lo, hi);
}

Label classify(const ModelParams& model, const FeatureVector& x, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error(ErrorCode::InvalidConfig, "threshold must be in (0, 1)");
  return predict_prob(model, x) >= threshold ? Label::Influential : Label::NonInfluential;
}

// ---------------------------------------------------------------- folds

int FoldPlan::fold_of(std::string_view post_id) const {
  auto it = assignment.find(post_id);
  if (it == assignment.end()) throw std::out_of_range("post not in fold plan: " + std::string(post_id));
  return it->second;
}

namespace {

std::uint64_t seeded_hash(std::uint64_t seed, std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_byte = [&](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : text) mix_byte(static_cast<unsigned char>(c));
  // splitmix64 finalizer
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

}  // namespace

FoldPlan stratified_folds(std::span<const std::string> post_ids, std::span<const Label> labels, int k,
                          std::uint64_t seed) {
  if (post_ids.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "post ids and labels differ in length");
  if (k < 2) throw Error(ErrorCode::TooFewExamples, "k must be at least 2");
  std::vector<std::pair<std::uint64_t, std::string_view>> pos, neg;
  for (std::size_t i = 0; i < post_ids.size(); ++i) {
    auto& bucket = labels[i] == Label::Influential ? pos : neg;
    bucket.emplace_back(seeded_hash(seed, post_ids[i]), post_ids[i]);
  }
  if (pos.size() < static_cast<std::size_t>(k) || neg.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::TooFewExamples, std::to_string(pos.size()) + " positive and " + std::to_string(neg.size()) +
                                               " negative examples for " + std::to_string(k) + " folds");
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  FoldPlan plan;
  plan.k = k;
  std::size_t slot = 0;
  for (const auto* bucket : {&pos, &neg}) {
    for (const auto& [hash, id] : *bucket) {
      plan.assignment.emplace(std::string(id), static_cast<int>(slot % k));
      ++slot;
    }
  }
  return plan;
}

ConfusionMatrix cross_validate_dataset(const Dataset& data, const FoldPlan& plan, const TrainConfig& config) {
  std::vector<Label> gold, predicted;
  for (int fold = 0; fold < plan.k; ++fold) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < data.size(); ++i) {
      (plan.fold_of(data.post_ids()[i]) == fold ? test_rows : train_rows).push_back(i);
    }
    if (test_rows.empty()) continue;
    const ModelParams model = train(data.subset(train_rows), config);
    for (std::size_t i : test_rows) {
      gold.push_back(data.label(i));
      predicted.push_back(classify(model, data.rows()[i]));
    }
  }
  return confusion(gold, predicted);
}

// ---------------------------------------------------------------- feature sets

const std::vector<std::string>& FeatureSetSpec::valid_names() {
  static const std::vector<std::string> names{"unigram", "wc", "sentiment", "meq"};
  return names;
}

FeatureSetSpec FeatureSetSpec::parse(std::string_view comma_list) {
  FeatureSetSpec spec;
  while (!comma_list.empty()) {
    const auto comma = comma_list.find(',');
    auto name = comma_list.substr(0, comma);
    comma_list = comma == std::string_view::npos ? std::string_view{} : comma_list.substr(comma + 1);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    if (name.empty()) continue;
    if (name == "unigram") {
      spec.unigram = true;
    } else if (name == "wc") {
      spec.wc = true;
    } else if (name == "sentiment") {
      spec.sentiment = true;
    } else if (name == "meq") {
      spec.meq = true;
    } else {
      throw Error(ErrorCode::InvalidConfig,
                  "unknown feature set '" + std::string(name) + "'; valid sets: unigram, wc, sentiment, meq");
    }
  }
  return spec;
}

std::vector<std::string> FeatureSetSpec::names() const {
  std::vector<std::string> out;
  if (unigram) out.emplace_back("unigram");
  if (wc) out.emplace_back("wc");
  if (sentiment) out.emplace_back("sentiment");
  if (meq) out.emplace_back("meq");
  return out;
}

FeatureVector featurize(const Example& example, const FeatureSetSpec& spec, const Vocabulary* vocab) {
  FeatureVector out;
  if (spec.unigram) {
    if (!vocab) throw Error(ErrorCode::InvalidConfig, "unigram features need a vocabulary");
    out.merge(unigram_features(example.tokens, *vocab));
  }
  if (spec.wc) out.merge(example.word_category);
  if (spec.sentiment) out.merge(example.sentiment);
  if (spec.meq) out.merge(example.meq);
  return out;
}

namespace {

Dataset dataset_from(std::span<const Example* const> examples, const FeatureSetSpec& spec, const Vocabulary* vocab) {
  std::vector<std::string> ids;
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
  for (const Example* e : examples) {
    ids.push_back(e->post_id);
    rows.push_back(featurize(*e, spec, vocab));
    labels.push_back(e->label);
  }
  return Dataset(std::move(ids), std::move(rows), std::move(labels));
}

std::vector<const TokenizedPost*> tokens_of(std::span<const Example* const> examples) {
  std::vector<const TokenizedPost*> out;
  for (const Example* e : examples) out.push_back(&e->tokens);
  return out;
}

}  // namespace

CvResult cross_validate(std::span<const Example> examples, const FeatureSetSpec& spec, const FoldPlan& plan,
                        const TrainConfig& config, const CvOptions& options) {
  std::vector<Label> predictions(examples.size(), Label::NonInfluential);
  std::vector<Label> gold, pooled;
  for (int fold = 0; fold < plan.k; ++fold) {
    std::vector<const Example*> training;
    std::vector<std::size_t> testing;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      if (plan.fold_of(examples[i].post_id) == fold) {
        testing.push_back(i);
      } else {
        training.push_back(&examples[i]);
      }
    }
    if (testing.empty()) continue;
    Vocabulary vocab;
    if (spec.unigram) {
      vocab = build_vocabulary(std::span<const TokenizedPost* const>(tokens_of(training)), options.min_df);
      if (options.on_fold_vocabulary) options.on_fold_vocabulary(fold, vocab, training);
    }
    const ModelParams model = train(dataset_from(training, spec, &vocab), config);
    for (std::size_t i : testing) {
      predictions[i] = classify(model, featurize(examples[i], spec, &vocab));
      gold.push_back(examples[i].label);
      pooled.push_back(predictions[i]);
    }
  }

  std::vector<const Example*> all;
  for (const auto& e : examples) all.push_back(&e);
  Vocabulary full_vocab;
  if (spec.unigram) full_vocab = build_vocabulary(std::span<const TokenizedPost* const>(tokens_of(all)), options.min_df);
  ModelParams final_model = train(dataset_from(all, spec, &full_vocab), config);

  const std::size_t top_k = options.top_k_weights == 0 ? final_model.weights.size() : options.top_k_weights;
  EvalReport report(confusion(gold, pooled), weight_report(final_model, top_k));
  return CvResult{std::move(report), std::move(final_model), std::move(predictions)};
}

// ---------------------------------------------------------------- selection

std::vector<SelectionStep> forward_select(const Dataset& data, std::span<const std::string> candidates,
                                          std::size_t budget, const FoldPlan& plan, const TrainConfig& config) {
  std::set<std::string> remaining(candidates.begin(), candidates.end());
  std::vector<std::string> selected;
  std::vector<SelectionStep> steps;
  while (steps.size() < budget && !remaining.empty()) {
    const std::string* best = nullptr;
    double best_accuracy = -1.0;
    for (const auto& candidate : remaining) {  // lexicographic, so ties keep the first
      selected.push_back(candidate);
      const double acc = accuracy(cross_validate_dataset(data.restrict_features(selected), plan, config));
      selected.pop_back();
      if (acc > best_accuracy) {
        best_accuracy = acc;
        best = &candidate;
      }
    }
    selected.push_back(*best);
    steps.push_back({*best, best_accuracy});
    remaining.erase(*best);
  }
  return steps;
}

}  // namespace uptake
