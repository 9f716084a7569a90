#include "uptake/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "uptake/error.hpp"
#include "uptake/jsonl.hpp"

namespace uptake {

ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> predicted) {
  if (gold.size() != predicted.size() || gold.empty()) {
    throw Error(ErrorCode::LengthMismatch,
                "gold has " + std::to_string(gold.size()) + " labels, predicted " + std::to_string(predicted.size()));
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] == Label::Influential;
    const bool p = predicted[i] == Label::Influential;
    if (g && p) ++cm.tp;
    if (g && !p) ++cm.fn;
    if (!g && p) ++cm.fp;
    if (!g && !p) ++cm.tn;
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() <= 0) throw Error(ErrorCode::EmptyMatrix, "accuracy of an empty confusion matrix");
  return 100.0 * static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

bool f_positive_is_degenerate(const ConfusionMatrix& cm) { return cm.tp + cm.fp == 0 || cm.tp + cm.fn == 0; }

double f_positive(const ConfusionMatrix& cm) {
  if (f_positive_is_degenerate(cm)) return 0.0;
  return 100.0 * 2.0 * static_cast<double>(cm.tp) / static_cast<double>(2 * cm.tp + cm.fp + cm.fn);
}

double kappa(const ConfusionMatrix& cm) {
  if (cm.total() <= 0) throw Error(ErrorCode::EmptyMatrix, "kappa of an empty confusion matrix");
  const double n = static_cast<double>(cm.total());
  const double observed = static_cast<double>(cm.tp + cm.tn) / n;
  const double gold_pos = static_cast<double>(cm.tp + cm.fn) / n;
  const double pred_pos = static_cast<double>(cm.tp + cm.fp) / n;
  const double chance = gold_pos * pred_pos + (1.0 - gold_pos) * (1.0 - pred_pos);
  if (chance == 1.0) return observed == 1.0 ? 1.0 : 0.0;
  return (observed - chance) / (1.0 - chance);
}

double cohens_kappa(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::LengthMismatch,
                "label lists of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  const double n = static_cast<double>(a.size());
  std::map<int, std::pair<double, double>> marginals;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    marginals[a[i]].first += 1.0;
    marginals[b[i]].second += 1.0;
    if (a[i] == b[i]) agree += 1.0;
  }
  const double observed = agree / n;
  double chance = 0.0;
  for (const auto& [category, counts] : marginals) chance += (counts.first / n) * (counts.second / n);
  if (chance == 1.0) return observed == 1.0 ? 1.0 : 0.0;
  return (observed - chance) / (1.0 - chance);
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = std::abs(value) * scale;
  const double floor_part = std::floor(scaled);
  const double frac = scaled - floor_part;
  const double rounded = frac >= 0.5 - 1e-9 ? floor_part + 1.0 : floor_part;
  return std::copysign(rounded / scale, value);
}

WeightList weight_report(const ModelParams& model, std::size_t top_k) {
  WeightList all(model.weights.begin(), model.weights.end());
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    const double ax = std::abs(x.second), ay = std::abs(y.second);
    if (ax != ay) return ax > ay;
    return x.first < y.first;
  });
  if (all.size() > top_k) all.resize(top_k);
  return all;
}

std::string render_weight_report(const WeightList& weights) {
  static constexpr std::pair<std::string_view, std::string_view> kGroups[] = {
      {"meq:", "MEQ and derived features"},
      {"wc:", "Word category-based features"},
      {"sent:", "Sentiment-based features"},
      {"uni:", "Unigram features"},
  };
  std::ostringstream out;
  for (const auto& [prefix, title] : kGroups) {
    bool header = false;
    for (const auto& [name, w] : weights) {
      if (!std::string_view(name).starts_with(prefix)) continue;
      if (!header) {
        out << title << '\n';
        header = true;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", round_half_up(w, 4));
      out << "  " << name.substr(prefix.size()) << '\t' << buf << '\n';
    }
  }
  return out.str();
}

EvalReport::EvalReport(ConfusionMatrix cm, WeightList weights)
    : confusion_(cm),
      accuracy_(uptake::accuracy(cm)),
      kappa_(uptake::kappa(cm)),
      f_positive_(uptake::f_positive(cm)),
      weights_(std::move(weights)) {}

std::string report_to_json(const EvalReport& report, std::span<const std::string> featuresets, int folds,
                           std::uint64_t seed) {
  jsonl::OrderedJson obj;
  obj["accuracy"] = round_half_up(report.accuracy(), 2);
  obj["kappa"] = round_half_up(report.kappa(), 4);
  obj["f_positive"] = round_half_up(report.f_positive(), 2);
  const auto& cm = report.confusion();
  obj["confusion"] = {{"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}, {"tp", cm.tp}};
  auto weights = jsonl::OrderedJson::array();
  for (const auto& [name, w] : report.weights()) weights.push_back({{"name", name}, {"weight", w}});
  obj["weights"] = std::move(weights);
  obj["featuresets"] = std::vector<std::string>(featuresets.begin(), featuresets.end());
  obj["folds"] = folds;
  obj["seed"] = seed;
  return obj.dump(2) + "\n";
}

AgreementReport agreement(std::span<const MeqAnnotation> annotations, std::string_view annotator_a,
                          std::string_view annotator_b) {
  // Earliest annotation per (annotator, post).
  auto collect = [&](std::string_view who) {
    std::map<std::string, const MeqAnnotation*> out;
    for (const auto& a : annotations) {
      if (a.annotator != who) continue;
      auto [it, inserted] = out.emplace(a.post_id, &a);
      if (!inserted && a.created_at < it->second->created_at) it->second = &a;
    }
    return out;
  };
  const auto by_a = collect(annotator_a);
  const auto by_b = collect(annotator_b);

  std::vector<int> ea, eb, qa, qb, ma, mb;
  for (const auto& [post_id, la] : by_a) {
    auto it = by_b.find(post_id);
    if (it == by_b.end()) continue;
    const auto* lb = it->second;
    ea.push_back(la->label.enthusiasm);
    eb.push_back(lb->label.enthusiasm);
    qa.push_back(la->label.qualifier);
    qb.push_back(lb->label.qualifier);
    ma.push_back(la->label.modification);
    mb.push_back(lb->label.modification);
  }
  if (ea.empty()) {
    throw Error(ErrorCode::NoOverlap,
                "annotators " + std::string(annotator_a) + " and " + std::string(annotator_b) + " share no posts");
  }
  AgreementReport report;
  report.annotator_a = annotator_a;
  report.annotator_b = annotator_b;
  report.overlap_size = ea.size();
  report.enthusiasm = cohens_kappa(ea, eb);
  report.qualifier = cohens_kappa(qa, qb);
  report.modification = cohens_kappa(ma, mb);
  return report;
}

std::string agreement_to_json(const AgreementReport& report) {
  jsonl::OrderedJson obj;
  obj["a"] = report.annotator_a;
  obj["b"] = report.annotator_b;
  obj["overlap_size"] = report.overlap_size;
  obj["kappa"] = {{"enthusiasm", report.enthusiasm},
                  {"qualifier", report.qualifier},
                  {"modification", report.modification}};
  return obj.dump();
}

}  // namespace uptake
