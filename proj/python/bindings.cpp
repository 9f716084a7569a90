#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "uptake/corpus.hpp"
#include "uptake/error.hpp"
#include "uptake/eval.hpp"
#include "uptake/influence.hpp"
#include "uptake/learn.hpp"
#include "uptake/meq.hpp"
#include "uptake/pipeline.hpp"
#include "uptake/sentiment.hpp"
#include "uptake/synth.hpp"
#include "uptake/textfeat.hpp"

namespace py = pybind11;
using namespace uptake;

namespace {

using FeatureDict = std::map<std::string, double>;

FeatureDict to_dict(const FeatureVector& fv) { return FeatureDict(fv.begin(), fv.end()); }

FeatureVector from_dict(const FeatureDict& d) {
  FeatureVector fv;
  for (const auto& [k, v] : d) fv.set(k, v);
  return fv;
}

Label to_label(bool influential) { return influential ? Label::Influential : Label::NonInfluential; }

std::vector<Label> to_labels(const std::vector<bool>& flags) {
  std::vector<Label> out;
  for (bool f : flags) out.push_back(to_label(f));
  return out;
}

Dataset make_dataset(std::vector<std::string> ids, const std::vector<FeatureDict>& rows, const std::vector<bool>& labels) {
  std::vector<FeatureVector> fvs;
  for (const auto& r : rows) fvs.push_back(from_dict(r));
  return Dataset(std::move(ids), std::move(fvs), to_labels(labels));
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["accuracy"] = r.accuracy();
  d["kappa"] = r.kappa();
  d["f_positive"] = r.f_positive();
  const auto& cm = r.confusion();
  d["confusion"] = py::dict(py::arg("tn") = cm.tn, py::arg("fp") = cm.fp, py::arg("fn") = cm.fn, py::arg("tp") = cm.tp);
  d["weights"] = r.weights();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Influence labeling, text features and logistic-regression evaluation for forum posts.";

  py::register_exception<Error>(m, "UptakeError", PyExc_ValueError);

  py::enum_<AdoptionKind>(m, "AdoptionKind").value("PROJECT", AdoptionKind::Project).value("QUEUE", AdoptionKind::Queue);

  py::class_<Post>(m, "Post")
      .def(py::init([](std::string post_id, std::string thread_id, std::string author, Timestamp timestamp,
                       std::string text, std::vector<std::string> patterns) {
             return Post{std::move(post_id), std::move(thread_id), std::move(author), timestamp, std::move(text),
                         std::move(patterns)};
           }),
           py::arg("post_id"), py::arg("thread_id"), py::arg("author"), py::arg("timestamp"), py::arg("text") = "",
           py::arg("patterns") = std::vector<std::string>{})
      .def_readwrite("post_id", &Post::post_id)
      .def_readwrite("thread_id", &Post::thread_id)
      .def_readwrite("author", &Post::author)
      .def_readwrite("timestamp", &Post::timestamp)
      .def_readwrite("text", &Post::text)
      .def_readwrite("patterns", &Post::mentioned_patterns)
      .def("__repr__", [](const Post& p) { return "<Post " + p.post_id + " in " + p.thread_id + ">"; });

  py::class_<AdoptionEvent>(m, "AdoptionEvent")
      .def(py::init([](std::string user, std::string pattern, Timestamp timestamp, AdoptionKind kind) {
             return AdoptionEvent{std::move(user), std::move(pattern), timestamp, kind};
           }),
           py::arg("user"), py::arg("pattern"), py::arg("timestamp"), py::arg("kind") = AdoptionKind::Project)
      .def_readwrite("user", &AdoptionEvent::user)
      .def_readwrite("pattern", &AdoptionEvent::pattern)
      .def_readwrite("timestamp", &AdoptionEvent::timestamp)
      .def_readwrite("kind", &AdoptionEvent::kind);

  py::class_<Corpus>(m, "Corpus")
      .def(py::init([](std::vector<Post> posts, std::vector<AdoptionEvent> adoptions) {
             return Corpus::assemble(std::move(posts), std::move(adoptions));
           }),
           py::arg("posts"), py::arg("adoptions") = std::vector<AdoptionEvent>{})
      .def_static("load", &load_corpus_files, py::arg("posts_path"), py::arg("adoptions_path"))
      .def_static(
          "from_jsonl",
          [](const std::string& posts, const std::string& adoptions) {
            std::istringstream p(posts), a(adoptions);
            return load_corpus(p, a);
          },
          py::arg("posts"), py::arg("adoptions") = "")
      .def("posts", [](const Corpus& c) {
        std::vector<Post> out;
        for (const Post* p : c.posts()) out.push_back(*p);
        return out;
      })
      .def_property_readonly("adoptions", &Corpus::adoptions)
      .def_property_readonly("thread_count", [](const Corpus& c) { return c.threads().size(); })
      .def("__len__", &Corpus::post_count)
      .def("validate", &validate_corpus)
      .def("posts_jsonl", [](const Corpus& c) {
        std::ostringstream out;
        write_posts_jsonl(out, c);
        return out.str();
      })
      .def("adoptions_jsonl", [](const Corpus& c) {
        std::ostringstream out;
        write_adoptions_jsonl(out, c);
        return out.str();
      });

  py::class_<InfluenceConfig>(m, "InfluenceConfig")
      .def(py::init<>())
      .def_readwrite("window_seconds", &InfluenceConfig::window_seconds)
      .def_readwrite("include_prior_posters", &InfluenceConfig::include_prior_posters)
      .def_readwrite("exclude_author", &InfluenceConfig::exclude_author)
      .def_readwrite("exclude_prior_adopters_from_numerator", &InfluenceConfig::exclude_prior_adopters_from_numerator)
      .def_readwrite("adoption_horizon_seconds", &InfluenceConfig::adoption_horizon_seconds);

  py::class_<UptakeRecord>(m, "UptakeRecord")
      .def_readonly("post_id", &UptakeRecord::post_id)
      .def_readonly("pattern", &UptakeRecord::pattern)
      .def_readonly("n", &UptakeRecord::n)
      .def_readonly("x", &UptakeRecord::x)
      .def_readonly("percent_uptake", &UptakeRecord::percent_uptake);

  py::class_<LabeledPost>(m, "LabeledPost")
      .def_readonly("post_id", &LabeledPost::post_id)
      .def_property_readonly("influential", [](const LabeledPost& l) { return l.label == Label::Influential; })
      .def_readonly("uptake", &LabeledPost::uptake_records);

  m.def("label_corpus", &label_corpus, py::arg("corpus"), py::arg("config") = InfluenceConfig{},
        "One entry per pattern-mentioning post that somebody was exposed to.");

  py::class_<MeqLabel>(m, "MeqLabel")
      .def(py::init([](bool e, bool q, bool m) { return MeqLabel{e, q, m}; }), py::arg("enthusiasm") = false,
           py::arg("qualifier") = false, py::arg("modification") = false)
      .def_readwrite("enthusiasm", &MeqLabel::enthusiasm)
      .def_readwrite("qualifier", &MeqLabel::qualifier)
      .def_readwrite("modification", &MeqLabel::modification)
      .def("any", &MeqLabel::any)
      .def(py::self == py::self)
      .def("__repr__", [](const MeqLabel& l) {
        return "MeqLabel(E=" + std::to_string(l.enthusiasm) + ", Q=" + std::to_string(l.qualifier) +
               ", M=" + std::to_string(l.modification) + ")";
      });

  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("seed", &SynthConfig::seed)
      .def_readwrite("n_threads", &SynthConfig::n_threads)
      .def_readwrite("posts_per_thread", &SynthConfig::posts_per_thread)
      .def_readwrite("n_users", &SynthConfig::n_users)
      .def_readwrite("n_patterns", &SynthConfig::n_patterns)
      .def_readwrite("cue_strength", &SynthConfig::cue_strength)
      .def_readwrite("target_posts", &SynthConfig::target_posts);

  m.def(
      "generate_synthetic",
      [](const SynthConfig& c) {
        auto s = generate_synthetic(c);
        return py::make_tuple(std::move(s.corpus), std::move(s.ground_truth));
      },
      py::arg("config") = SynthConfig{}, "Returns (corpus, {post_id: MeqLabel}).");

  py::class_<TokenizedPost>(m, "TokenizedPost")
      .def_readonly("tokens", &TokenizedPost::tokens)
      .def_readonly("exclamation_count", &TokenizedPost::exclamation_count)
      .def_readonly("raw_length_chars", &TokenizedPost::raw_length_chars);
  m.def("tokenize", &tokenize, py::arg("text"));

  m.def(
      "word_category_features",
      [](const std::string& text) { return to_dict(word_category_features(tokenize(text), WordLists::bundled())); },
      py::arg("text"));

  py::class_<SentimentScores>(m, "SentimentScores")
      .def_readonly("positive", &SentimentScores::positive)
      .def_readonly("negative", &SentimentScores::negative)
      .def_readonly("neutral", &SentimentScores::neutral)
      .def_readonly("compound", &SentimentScores::compound);

  py::class_<SentimentLexicon>(m, "SentimentLexicon")
      .def(py::init<>())
      .def_static("bundled", &SentimentLexicon::bundled)
      .def_readwrite("valences", &SentimentLexicon::valences)
      .def_readwrite("negators", &SentimentLexicon::negators)
      .def_readwrite("boosters", &SentimentLexicon::boosters);

  m.def(
      "sentiment",
      [](const std::string& text, const std::optional<SentimentLexicon>& lexicon) {
        return score(tokenize(text), lexicon ? *lexicon : SentimentLexicon::bundled());
      },
      py::arg("text"), py::arg("lexicon") = py::none());

  m.def(
      "interaction_features", [](const MeqLabel& l) { return to_dict(interaction_features(l)); }, py::arg("label"));
  m.def(
      "suggest_meq",
      [](const std::string& text) {
        const auto post = tokenize(text);
        return suggest_meq(post, text, score(post, SentimentLexicon::bundled()), CueLexicons::bundled());
      },
      py::arg("text"), "Heuristic cue suggestion; never a gold label.");

  py::class_<ConfusionMatrix>(m, "ConfusionMatrix")
      .def(py::init([](std::int64_t tn, std::int64_t fp, std::int64_t fn, std::int64_t tp) {
             return ConfusionMatrix{tn, fp, fn, tp};
           }),
           py::arg("tn"), py::arg("fp"), py::arg("fn"), py::arg("tp"))
      .def_readonly("tn", &ConfusionMatrix::tn)
      .def_readonly("fp", &ConfusionMatrix::fp)
      .def_readonly("fn", &ConfusionMatrix::fn)
      .def_readonly("tp", &ConfusionMatrix::tp)
      .def(py::self == py::self);

  m.def(
      "confusion",
      [](const std::vector<bool>& gold, const std::vector<bool>& predicted) {
        return confusion(to_labels(gold), to_labels(predicted));
      },
      py::arg("gold"), py::arg("predicted"));
  m.def("accuracy", &accuracy, py::arg("cm"));
  m.def("f_positive", &f_positive, py::arg("cm"));
  m.def("kappa", &kappa, py::arg("cm"));
  m.def(
      "cohens_kappa", [](const std::vector<int>& a, const std::vector<int>& b) { return cohens_kappa(a, b); },
      py::arg("a"), py::arg("b"));
  m.def("round_half_up", &round_half_up, py::arg("value"), py::arg("decimals"));

  py::class_<ModelParams>(m, "ModelParams")
      .def_readonly("weights", &ModelParams::weights)
      .def_readonly("bias", &ModelParams::bias)
      .def_readonly("lambda_", &ModelParams::lambda)
      .def(
          "predict_prob", [](const ModelParams& mp, const FeatureDict& x) { return predict_prob(mp, from_dict(x)); },
          py::arg("features"))
      .def(
          "classify",
          [](const ModelParams& mp, const FeatureDict& x, double threshold) {
            return classify(mp, from_dict(x), threshold) == Label::Influential;
          },
          py::arg("features"), py::arg("threshold") = 0.5);

  m.def(
      "train",
      [](const std::vector<FeatureDict>& rows, const std::vector<bool>& labels, double lambda, int max_iterations,
         double tolerance) {
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < rows.size(); ++i) ids.push_back(std::to_string(i));
        TrainConfig cfg;
        cfg.lambda = lambda;
        cfg.max_iterations = max_iterations;
        cfg.gradient_tolerance = tolerance;
        return train(make_dataset(std::move(ids), rows, labels), cfg);
      },
      py::arg("rows"), py::arg("labels"), py::arg("lambda_") = 0.01, py::arg("max_iterations") = 5000,
      py::arg("tolerance") = 1e-6, "L2-regularized logistic regression; labels are True for influential.");

  m.def(
      "stratified_folds",
      [](const std::vector<std::string>& ids, const std::vector<bool>& labels, int k, std::uint64_t seed) {
        const auto plan = stratified_folds(ids, to_labels(labels), k, seed);
        return std::map<std::string, int>(plan.assignment.begin(), plan.assignment.end());
      },
      py::arg("post_ids"), py::arg("labels"), py::arg("k") = 5, py::arg("seed") = 13);

  m.def(
      "evaluate",
      [](const Corpus& corpus, const std::vector<LabeledPost>& labeled, const std::map<std::string, MeqLabel>& meq,
         const std::string& sets, int folds, std::uint64_t seed, double lambda, int min_df, std::size_t top_k) {
        const auto spec = FeatureSetSpec::parse(sets);
        const auto examples = build_examples(corpus, labeled, meq, Resources::bundled());
        const auto plan = stratified_folds(post_ids_of(examples), labels_of(examples), folds, seed);
        TrainConfig cfg;
        cfg.lambda = lambda;
        cfg.seed = seed;
        CvOptions options;
        options.min_df = min_df;
        options.top_k_weights = top_k;
        return report_dict(cross_validate(examples, spec, plan, cfg, options).report);
      },
      py::arg("corpus"), py::arg("labeled"), py::arg("meq") = std::map<std::string, MeqLabel>{},
      py::arg("sets") = "unigram", py::arg("folds") = 5, py::arg("seed") = 13, py::arg("lambda_") = 0.01,
      py::arg("min_df") = 2, py::arg("top_k") = 20,
      "Stratified k-fold cross-validation; returns pooled metrics and the final model's top weights.");

  m.attr("__version__") = "0.3.0";
}
