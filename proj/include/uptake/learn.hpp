#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uptake/eval.hpp"
#include "uptake/label.hpp"
#include "uptake/model.hpp"
#include "uptake/textfeat.hpp"

namespace uptake {

/// Labeled sparse rows with a feature index over every name that occurs.
class Dataset {
 public:
  Dataset() = default;
  /// Throws Error(LengthMismatch) if the three lists differ in length.
  Dataset(std::vector<std::string> post_ids, std::vector<FeatureVector> rows, std::vector<Label> labels);

  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& post_ids() const { return post_ids_; }
  const std::vector<FeatureVector>& rows() const { return rows_; }
  /// +1 (Influential) / -1 (NonInfluential).
  const std::vector<int>& labels() const { return labels_; }
  Label label(std::size_t row) const { return labels_[row] > 0 ? Label::Influential : Label::NonInfluential; }
  /// Feature name -> column, columns contiguous in name order.
  const std::map<std::string, std::size_t, std::less<>>& feature_index() const { return feature_index_; }

  Dataset subset(std::span<const std::size_t> row_indices) const;
  /// Same rows keeping only the named features.
  Dataset restrict_features(std::span<const std::string> names) const;

 private:
  std::vector<std::string> post_ids_;
  std::vector<FeatureVector> rows_;
  std::vector<int> labels_;
  std::map<std::string, std::size_t, std::less<>> feature_index_;
};

struct TrainConfig {
  double lambda = 0.01;
  int max_iterations = 5000;
  double gradient_tolerance = 1e-6;
  /// Seed for fold assignment in experiments; the optimizer is deterministic.
  std::uint64_t seed = 13;

  void validate() const;
};

struct TrainTrace {
  std::vector<double> objective;  // J after every accepted step, starting at w = 0, b = 0
  double gradient_inf_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes (1/m) sum log(1 + exp(-y (w.x + b))) + (lambda/2) |w|^2 by
/// full-batch gradient descent with Armijo backtracking from w = 0, b = 0.
/// Stops when |grad|_inf < tolerance or after max_iterations.
/// Throws Error(SingleClassData) or Error(NonFiniteFeature).
ModelParams train(const Dataset& data, const TrainConfig& config, TrainTrace* trace = nullptr);

/// The training objective of `model` (using model.lambda) on `data`.
double objective(const Dataset& data, const ModelParams& model);

/// Logistic link; unknown features contribute 0. Strictly inside (0, 1).
double predict_prob(const ModelParams& model, const FeatureVector& x);

/// Influential iff predict_prob >= threshold.
Label classify(const ModelParams& model, const FeatureVector& x, double threshold = 0.5);

struct FoldPlan {
  int k = 5;
  std::map<std::string, int, std::less<>> assignment;  // post_id -> fold in [0, k)

  /// Throws std::out_of_range for unknown ids.
  int fold_of(std::string_view post_id) const;
};

/// Each class ordered by a seeded hash of post_id, then dealt round-robin; the
/// negative class continues where the positive class stopped.
/// Throws Error(TooFewExamples) if k < 2 or a class has fewer than k members.
FoldPlan stratified_folds(std::span<const std::string> post_ids, std::span<const Label> labels, int k,
                          std::uint64_t seed);

/// Pooled out-of-fold confusion matrix on fixed feature vectors.
ConfusionMatrix cross_validate_dataset(const Dataset& data, const FoldPlan& plan, const TrainConfig& config);

/// Which feature families to use; parsed from "unigram,wc,sentiment,meq".
struct FeatureSetSpec {
  bool unigram = false;
  bool wc = false;
  bool sentiment = false;
  bool meq = false;

  /// Throws Error(InvalidConfig) naming the valid sets on unknown names.
  static FeatureSetSpec parse(std::string_view comma_list);
  static const std::vector<std::string>& valid_names();
  std::vector<std::string> names() const;
};

/// A labeled post with its precomputed, fold-independent features.
struct Example {
  std::string post_id;
  Label label = Label::NonInfluential;
  TokenizedPost tokens;
  FeatureVector word_category;
  FeatureVector sentiment;
  FeatureVector meq;
};

/// Unigram features need a vocabulary; pass nullptr when spec.unigram is false.
FeatureVector featurize(const Example& example, const FeatureSetSpec& spec, const Vocabulary* vocab);

struct CvOptions {
  int min_df = 2;
  /// Weights kept in the report; 0 keeps all.
  std::size_t top_k_weights = 0;
  /// Called with each fold's vocabulary and that fold's training examples.
  std::function<void(int fold, const Vocabulary& vocab, std::span<const Example* const> training)> on_fold_vocabulary;
};

struct CvResult {
  EvalReport report;
  ModelParams final_model;          // retrained on every example
  std::vector<Label> predictions;   // out-of-fold, in example order
};

/// k-fold evaluation with per-fold vocabularies built from training folds only;
/// predictions pooled into one confusion matrix.
CvResult cross_validate(std::span<const Example> examples, const FeatureSetSpec& spec, const FoldPlan& plan,
                        const TrainConfig& config, const CvOptions& options = {});

struct SelectionStep {
  std::string feature;
  double accuracy = 0.0;  // pooled CV accuracy after adding `feature`
};

/// Greedy forward selection maximizing pooled CV accuracy; ties go to the
/// lexicographically smaller name. Budgets beyond the candidate count select all.
std::vector<SelectionStep> forward_select(const Dataset& data, std::span<const std::string> candidates,
                                          std::size_t budget, const FoldPlan& plan, const TrainConfig& config);

}  // namespace uptake
