// uptake: label forum posts by pattern uptake, extract features, and evaluate
// influence classifiers. Exit codes: 0 success, 1 runtime/data error, 2 usage error.
#include <CLI11.hpp>
#include <httplib.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include "uptake/annotate.hpp"
#include "uptake/corpus.hpp"
#include "uptake/error.hpp"
#include "uptake/eval.hpp"
#include "uptake/influence.hpp"
#include "uptake/jsonl.hpp"
#include "uptake/learn.hpp"
#include "uptake/pipeline.hpp"
#include "uptake/server.hpp"
#include "uptake/synth.hpp"
#include "uptake/wordlist.hpp"

namespace fs = std::filesystem;
using namespace uptake;

namespace {

std::ofstream open_output(const std::string& path) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return in;
}

Corpus load_posts_only(const std::string& posts_path) {
  auto posts = open_input(posts_path);
  std::istringstream no_adoptions;
  return load_corpus(posts, no_adoptions);
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, round_half_up(value, decimals));
  return buf;
}

void add_resource_options(CLI::App* cmd, ResourcePaths& paths) {
  auto* g = cmd->add_option_group("resources", "Override bundled word lists and lexicons");
  g->add_option("--pronouns", paths.pronouns, "Pronoun list");
  g->add_option("--articles", paths.articles, "Article list");
  g->add_option("--tobeverbs", paths.tobeverbs, "To-be verb list");
  g->add_option("--subordinators", paths.subordinators, "Subordinating conjunction list");
  g->add_option("--easy-words", paths.easy_words, "Easy-word (Dale-Chall style) list");
  g->add_option("--nominalization-suffixes", paths.nominalization_suffixes, "Nominalization suffix list");
  g->add_option("--lexicon", paths.sentiment_lexicon, "Sentiment lexicon (token<TAB>valence)");
  g->add_option("--negators", paths.negators, "Negator list");
  g->add_option("--boosters", paths.boosters, "Booster list (token<TAB>increment)");
  g->add_option("--qualifiers", paths.qualifier_phrases, "Qualifier phrase list");
  g->add_option("--modifications", paths.modification_markers, "Modification marker list");
}

CLI::Validator feature_set_validator() {
  return CLI::Validator(
      [](std::string& value) -> std::string {
        try {
          FeatureSetSpec::parse(value);
        } catch (const Error& e) {
          return e.what();
        }
        return {};
      },
      "SETS");
}

MergePolicy parse_policy(const std::string& name) {
  if (name == "conjunction") return MergePolicy::Conjunction;
  if (name == "disjunction") return MergePolicy::Disjunction;
  return MergePolicy::FirstWriter;
}

struct ExperimentOptions {
  std::string labeled_path;
  std::string posts_path;
  std::string annotations_path;
  std::string merge_policy = "first_writer";
  std::string sets = "unigram";
  int folds = 5;
  double lambda = 0.01;
  std::uint64_t seed = 13;
  int min_df = 2;
  int max_iterations = 5000;
  ResourcePaths resources;
};

void add_experiment_options(CLI::App* cmd, ExperimentOptions& o, const std::string& default_sets) {
  o.sets = default_sets;
  cmd->add_option("--labeled", o.labeled_path, "labeled.jsonl from `uptake label`")->required();
  cmd->add_option("--posts", o.posts_path, "posts.jsonl holding the post texts")->required();
  cmd->add_option("--annotations", o.annotations_path, "MEQ annotations (meq.jsonl or ground_truth.jsonl)");
  cmd->add_option("--merge-policy", o.merge_policy, "How to merge multiple annotations per post")
      ->check(CLI::IsMember({"first_writer", "conjunction", "disjunction"}));
  cmd->add_option("--sets", o.sets, "Comma list of feature sets: unigram,wc,sentiment,meq")
      ->check(feature_set_validator())
      ->capture_default_str();
  cmd->add_option("--folds", o.folds, "Cross-validation folds")->check(CLI::Range(2, 1000))->capture_default_str();
  cmd->add_option("--lambda", o.lambda, "L2 regularization strength")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--seed", o.seed, "Fold assignment seed")->capture_default_str();
  cmd->add_option("--min-df", o.min_df, "Minimum document frequency for unigrams")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iterations", o.max_iterations, "Optimizer iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_resource_options(cmd, o.resources);
}

struct Experiment {
  FeatureSetSpec spec;
  std::vector<Example> examples;
  FoldPlan plan;
  TrainConfig train;
};

Experiment prepare(const ExperimentOptions& o) {
  Experiment ex;
  ex.spec = FeatureSetSpec::parse(o.sets);
  auto labeled_in = open_input(o.labeled_path);
  const auto labeled = read_labeled_jsonl(labeled_in);
  const Corpus corpus = load_posts_only(o.posts_path);
  std::map<std::string, MeqLabel> meq;
  if (!o.annotations_path.empty()) {
    auto in = open_input(o.annotations_path);
    meq = merge_annotations(read_annotations_jsonl(in), parse_policy(o.merge_policy));
  } else if (ex.spec.meq) {
    throw Error(ErrorCode::InvalidConfig, "feature set meq requires --annotations");
  }
  const Resources resources = Resources::load(o.resources);
  ex.examples = build_examples(corpus, labeled, meq, resources);
  ex.train.lambda = o.lambda;
  ex.train.max_iterations = o.max_iterations;
  ex.train.seed = o.seed;
  ex.plan = stratified_folds(post_ids_of(ex.examples), labels_of(ex.examples), o.folds, o.seed);
  return ex;
}

// ---------------------------------------------------------------- commands

int run_synth(const SynthConfig& config, const std::string& out_dir) {
  const auto synthetic = generate_synthetic(config);
  fs::create_directories(out_dir);
  auto posts = open_output((fs::path(out_dir) / "posts.jsonl").string());
  write_posts_jsonl(posts, synthetic.corpus);
  auto adoptions = open_output((fs::path(out_dir) / "adoptions.jsonl").string());
  write_adoptions_jsonl(adoptions, synthetic.corpus);
  auto truth = open_output((fs::path(out_dir) / "ground_truth.jsonl").string());
  write_ground_truth_jsonl(truth, synthetic.ground_truth);
  std::cout << "wrote " << synthetic.corpus.post_count() << " posts (" << synthetic.ground_truth.size()
            << " mentioning patterns), " << synthetic.corpus.adoptions().size() << " adoptions to " << out_dir
            << "\n";
  return 0;
}

struct LabelOptions {
  std::string posts_path, adoptions_path, out_path;
  double window_days = 7.0;
  bool include_prior_posters = false;
  bool keep_author = false;
  bool count_prior_adopters = false;
  double horizon_days = 0.0;
};

int run_label(const LabelOptions& o) {
  InfluenceConfig config;
  config.window_seconds = std::max<std::int64_t>(1, std::llround(o.window_days * 86400.0));
  config.include_prior_posters = o.include_prior_posters;
  config.exclude_author = !o.keep_author;
  config.exclude_prior_adopters_from_numerator = !o.count_prior_adopters;
  if (o.horizon_days > 0) config.adoption_horizon_seconds = std::max<std::int64_t>(1, std::llround(o.horizon_days * 86400.0));

  const Corpus corpus = load_corpus_files(o.posts_path, o.adoptions_path);
  const auto labeled = label_corpus(corpus, config);
  auto out = open_output(o.out_path);
  write_labeled_jsonl(out, labeled);

  std::size_t mentioning = 0, influential = 0;
  for (const Post* p : corpus.posts()) mentioning += !p->mentioned_patterns.empty();
  for (const auto& lp : labeled) influential += lp.label == Label::Influential;
  std::cout << "labeled " << labeled.size() << " of " << mentioning << " pattern-mentioning posts ("
            << mentioning - labeled.size() << " omitted with no exposure): " << influential << " influential, "
            << labeled.size() - influential << " non-influential\n";
  return 0;
}

int run_evaluate(const ExperimentOptions& o, const std::string& report_path, const std::string& features_csv,
                 std::size_t top_k, bool print_weights) {
  const Experiment ex = prepare(o);
  CvOptions cv;
  cv.min_df = o.min_df;
  cv.top_k_weights = top_k;
  const CvResult result = cross_validate(ex.examples, ex.spec, ex.plan, ex.train, cv);

  auto out = open_output(report_path);
  out << report_to_json(result.report, ex.spec.names(), o.folds, o.seed);

  if (!features_csv.empty()) {
    Vocabulary vocab;
    if (ex.spec.unigram) {
      std::vector<TokenizedPost> tokens;
      for (const auto& e : ex.examples) tokens.push_back(e.tokens);
      vocab = build_vocabulary(tokens, o.min_df);
    }
    const Dataset data = build_dataset(ex.examples, ex.spec, &vocab);
    std::vector<FeatureRow> rows;
    for (std::size_t i = 0; i < data.size(); ++i) {
      rows.push_back({data.post_ids()[i], std::string(to_string(data.label(i))), &data.rows()[i]});
    }
    auto csv = open_output(features_csv);
    write_features_csv(csv, rows);
  }

  const auto& r = result.report;
  if (f_positive_is_degenerate(r.confusion())) {
    std::cerr << "warning: F-score undefined (no predicted or no actual positives); reported as 0\n";
  }
  std::cout << "sets " << o.sets << ": accuracy " << fixed(r.accuracy(), 2) << "  kappa " << fixed(r.kappa(), 4)
            << "  F " << fixed(r.f_positive(), 2) << "  (tn " << r.confusion().tn << ", fp " << r.confusion().fp
            << ", fn " << r.confusion().fn << ", tp " << r.confusion().tp << ")\n";
  if (print_weights) std::cout << render_weight_report(weight_report(result.final_model, top_k ? top_k : 20));
  return 0;
}

int run_select(const ExperimentOptions& o, std::size_t budget, const std::string& out_path) {
  const Experiment ex = prepare(o);
  Vocabulary vocab;
  if (ex.spec.unigram) {
    std::vector<TokenizedPost> tokens;
    for (const auto& e : ex.examples) tokens.push_back(e.tokens);
    vocab = build_vocabulary(tokens, o.min_df);
  }
  const Dataset data = build_dataset(ex.examples, ex.spec, &vocab);
  std::vector<std::string> candidates;
  for (const auto& [name, col] : data.feature_index()) candidates.push_back(name);
  const auto steps = forward_select(data, candidates, budget, ex.plan, ex.train);

  jsonl::OrderedJson obj;
  obj["budget"] = budget;
  obj["candidates"] = candidates.size();
  auto selected = jsonl::OrderedJson::array();
  auto accuracy_path = jsonl::OrderedJson::array();
  for (const auto& s : steps) {
    selected.push_back(s.feature);
    accuracy_path.push_back(round_half_up(s.accuracy, 2));
  }
  obj["selected"] = std::move(selected);
  obj["accuracy"] = std::move(accuracy_path);
  obj["featuresets"] = ex.spec.names();
  obj["folds"] = o.folds;
  obj["seed"] = o.seed;
  auto out = open_output(out_path);
  out << obj.dump(2) << "\n";
  std::cout << "selected " << steps.size() << " of " << candidates.size() << " features";
  if (!steps.empty()) std::cout << "; final pooled accuracy " << fixed(steps.back().accuracy, 2);
  std::cout << "\n";
  return 0;
}

int run_agreement(const std::string& path, const std::string& a, const std::string& b) {
  auto in = open_input(path);
  const auto annotations = read_annotations_jsonl(in);
  const auto report = agreement(annotations, a, b);
  std::cout << "overlap\t" << report.overlap_size << "\n"
            << "enthusiasm\t" << fixed(report.enthusiasm, 4) << "\n"
            << "qualifier\t" << fixed(report.qualifier, 4) << "\n"
            << "modification\t" << fixed(report.modification, 4) << "\n";
  return 0;
}

struct ServeOptions {
  std::string addr = "127.0.0.1:8080";
  std::string data_dir;
  std::size_t overlap = 40;
  std::vector<std::string> annotators{"a", "b"};
  std::uint64_t seed = 13;
  std::string ui_dir;
  ResourcePaths resources;
};

int run_serve(const ServeOptions& o) {
  const fs::path dir(o.data_dir);
  const Corpus corpus = load_posts_only((dir / "posts.jsonl").string());

  std::vector<std::string> ids;
  if (fs::exists(dir / "labeled.jsonl")) {
    auto in = open_input((dir / "labeled.jsonl").string());
    for (const auto& lp : read_labeled_jsonl(in)) ids.push_back(lp.post_id);
  } else {
    for (const Post* p : corpus.posts()) {
      if (!p->mentioned_patterns.empty()) ids.push_back(p->post_id);
    }
  }
  std::vector<ServedPost> served;
  for (const auto& id : ids) {
    const Post* p = corpus.find_post(id);
    if (!p) throw Error(ErrorCode::MalformedRecord, "labeled post " + id + " missing from posts.jsonl");
    served.push_back({p->post_id, p->text});
  }

  const fs::path assignment_path = dir / "assignment.json";
  SessionAssignment assignment;
  if (fs::exists(assignment_path)) {
    assignment = assignment_from_json(read_text_file(assignment_path.string()));
    for (const auto& a : o.annotators) {
      if (!assignment.assignment.count(a)) {
        throw Error(ErrorCode::InvalidOverlap, "annotator " + a + " is not in the existing " + assignment_path.string());
      }
    }
  } else {
    assignment = plan_assignment(ids, o.annotators, o.overlap, o.seed);
    auto out = open_output(assignment_path.string());
    out << assignment_to_json(assignment);
  }

  AnnotationService service(std::move(served), std::move(assignment), dir / "annotations.jsonl",
                            Resources::load(o.resources));
  httplib::Server server;
  register_routes(server, service, o.ui_dir);

  const auto colon = o.addr.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidConfig, "--addr must be host:port");
  const std::string host = o.addr.substr(0, colon);
  const int port = std::stoi(o.addr.substr(colon + 1));
  if (!server.bind_to_port(host, port)) throw Error(ErrorCode::Io, "cannot bind " + o.addr);
  std::cout << "serving " << ids.size() << " posts on http://" << o.addr << "/" << std::endl;

  // Worker threads inherit the blocked mask, so only the watcher sees the signal.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
  std::thread watcher([&] {
    int received = 0;
    sigwait(&stop_signals, &received);
    server.stop();
  });
  const bool clean = server.listen_after_bind();
  if (!clean) kill(getpid(), SIGTERM);
  watcher.join();
  return clean ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influence labeling, feature extraction and evaluation for threaded forum posts"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");

  SynthConfig synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with planted MEQ cues");
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--threads", synth.n_threads, "Number of threads")->check(CLI::PositiveNumber)->capture_default_str();
  synth_cmd->add_option("--posts", synth.target_posts, "Pattern-mentioning posts")->check(CLI::PositiveNumber)->capture_default_str();
  synth_cmd->add_option("--posts-per-thread", synth.posts_per_thread, "Posts per thread")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--users", synth.n_users, "Number of users")->check(CLI::PositiveNumber)->capture_default_str();
  synth_cmd->add_option("--patterns", synth.n_patterns, "Number of patterns")->check(CLI::PositiveNumber)->capture_default_str();
  synth_cmd->add_option("--cue-strength", synth.cue_strength, "Influence boost of cue-bearing posts")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();

  LabelOptions label;
  auto* label_cmd = app.add_subcommand("label", "Compute exposure and uptake and label posts");
  label_cmd->add_option("--posts", label.posts_path, "posts.jsonl")->required();
  label_cmd->add_option("--adoptions", label.adoptions_path, "adoptions.jsonl")->required();
  label_cmd->add_option("--window-days", label.window_days, "Exposure window after a post, in days")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  label_cmd->add_flag("--include-prior-posters", label.include_prior_posters, "Count earlier posters as exposed");
  label_cmd->add_flag("--keep-author", label.keep_author, "Count the post's author as exposed");
  label_cmd->add_flag("--count-prior-adopters", label.count_prior_adopters,
                      "Let users who adopted before the post count toward uptake");
  label_cmd->add_option("--horizon-days", label.horizon_days, "Ignore adoptions later than this after the post")
      ->check(CLI::NonNegativeNumber);
  label_cmd->add_option("--out", label.out_path, "labeled.jsonl output")->required();

  ExperimentOptions eval_opts;
  std::string report_path, features_csv;
  std::size_t top_k = 0;
  bool print_weights = false;
  auto* eval_cmd = app.add_subcommand("evaluate", "Cross-validate a logistic regression on chosen feature sets");
  add_experiment_options(eval_cmd, eval_opts, "unigram");
  eval_cmd->add_option("--report", report_path, "report.json output")->required();
  eval_cmd->add_option("--features-csv", features_csv, "Also export the full-data feature matrix");
  eval_cmd->add_option("--top-k", top_k, "Weights kept in the report (0 = all)")->capture_default_str();
  eval_cmd->add_flag("--print-weights", print_weights, "Print the weight table grouped by feature family");

  ExperimentOptions select_opts;
  std::size_t budget = 10;
  std::string selection_path;
  auto* select_cmd = app.add_subcommand("select", "Greedy forward feature selection by pooled CV accuracy");
  add_experiment_options(select_cmd, select_opts, "wc,sentiment,meq");
  select_cmd->add_option("--budget", budget, "Number of features to select")->required();
  select_cmd->add_option("--out", selection_path, "selection.json output")->required();

  std::string agreement_path, annotator_a, annotator_b;
  auto* agree_cmd = app.add_subcommand("agreement", "Per-cue Cohen's kappa between two annotators");
  agree_cmd->add_option("--annotations", agreement_path, "meq.jsonl")->required();
  agree_cmd->add_option("--a", annotator_a, "First annotator")->required();
  agree_cmd->add_option("--b", annotator_b, "Second annotator")->required();

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the blind MEQ annotation service");
  serve_cmd->add_option("--addr", serve.addr, "host:port to listen on")->capture_default_str();
  serve_cmd->add_option("--data-dir", serve.data_dir, "Directory with posts.jsonl (and optional labeled.jsonl)")
      ->required();
  serve_cmd->add_option("--overlap", serve.overlap, "Posts annotated by every annotator")->capture_default_str();
  serve_cmd->add_option("--annotators", serve.annotators, "Comma list of annotator ids")->delimiter(',');
  serve_cmd->add_option("--seed", serve.seed, "Assignment shuffle seed")->capture_default_str();
  serve_cmd->add_option("--ui-dir", serve.ui_dir, "Static UI assets served at /");
  add_resource_options(serve_cmd, serve.resources);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*synth_cmd) return run_synth(synth, synth_out);
    if (*label_cmd) return run_label(label);
    if (*eval_cmd) return run_evaluate(eval_opts, report_path, features_csv, top_k, print_weights);
    if (*select_cmd) return run_select(select_opts, budget, selection_path);
    if (*agree_cmd) return run_agreement(agreement_path, annotator_a, annotator_b);
    if (*serve_cmd) return run_serve(serve);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
