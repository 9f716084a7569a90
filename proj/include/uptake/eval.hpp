#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uptake/label.hpp"
#include "uptake/meq.hpp"
#include "uptake/model.hpp"

namespace uptake {

/// Binary confusion counts; Influential is the positive class.
struct ConfusionMatrix {
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tp = 0;

  std::int64_t total() const { return tn + fp + fn + tp; }
  bool operator==(const ConfusionMatrix&) const = default;
};

/// Throws Error(LengthMismatch) unless sizes match and are non-zero.
ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> predicted);

/// 100 * (tp + tn) / total. Throws Error(EmptyMatrix).
double accuracy(const ConfusionMatrix& cm);

/// 100 * 2tp / (2tp + fp + fn); 0 when no positives were predicted or present.
double f_positive(const ConfusionMatrix& cm);
bool f_positive_is_degenerate(const ConfusionMatrix& cm);

/// Cohen's kappa between gold and predicted labels. Throws Error(EmptyMatrix).
double kappa(const ConfusionMatrix& cm);

/// Cohen's kappa over categorical labels. Returns 1 when chance agreement and
/// observed agreement are both perfect. Throws Error(LengthMismatch).
double cohens_kappa(std::span<const int> a, std::span<const int> b);

/// Rounds half away from zero at `decimals` places, tolerating binary
/// representation error just below the half.
double round_half_up(double value, int decimals);

using WeightList = std::vector<std::pair<std::string, double>>;

/// Features by descending |weight|, ties by name; at most top_k entries.
WeightList weight_report(const ModelParams& model, std::size_t top_k);

/// Text table of `weights` grouped by namespace in the order meq, wc, sent, uni.
std::string render_weight_report(const WeightList& weights);

/// Scalar metrics are always derived from the stored confusion matrix.
class EvalReport {
 public:
  explicit EvalReport(ConfusionMatrix cm, WeightList weights = {});

  const ConfusionMatrix& confusion() const { return confusion_; }
  double accuracy() const { return accuracy_; }
  double kappa() const { return kappa_; }
  double f_positive() const { return f_positive_; }
  const WeightList& weights() const { return weights_; }

 private:
  ConfusionMatrix confusion_;
  double accuracy_;
  double kappa_;
  double f_positive_;
  WeightList weights_;
};

/// report.json: percents at 2 decimals, kappa at 4, round half up.
std::string report_to_json(const EvalReport& report, std::span<const std::string> featuresets, int folds,
                           std::uint64_t seed);

struct AgreementReport {
  std::string annotator_a;
  std::string annotator_b;
  std::size_t overlap_size = 0;
  double enthusiasm = 0.0;
  double qualifier = 0.0;
  double modification = 0.0;
};

/// Per-cue kappa over posts annotated by both annotators. Throws Error(NoOverlap).
AgreementReport agreement(std::span<const MeqAnnotation> annotations, std::string_view annotator_a,
                          std::string_view annotator_b);

std::string agreement_to_json(const AgreementReport& report);

}  // namespace uptake
