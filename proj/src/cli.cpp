// Copyright 2026 The PLT Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "plt/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "plt/ensemble.hpp"
#include "plt/errors.hpp"
#include "plt/hsm.hpp"
#include "plt/inference.hpp"
#include "plt/metrics.hpp"
#include "plt/model_io.hpp"
#include "plt/online.hpp"
#include "plt/plt.hpp"
#include "plt/random.hpp"
#include "plt/synth.hpp"
#include "plt/tree_build.hpp"

namespace plt::cli {
namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Dataset read_dataset_file(const std::string& path) {
  if (path == "-") return parse_dataset(std::cin);
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_dataset(in);
}

/// Writes to `path`, or to `fallback` when the path is empty or "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error("cannot open " + path + " for writing");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }
  void finish(const std::string& path) {
    os_->flush();
    if (!*os_) throw Error("failed writing " + (path.empty() ? std::string("output") : path));
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

void write_scored(std::ostream& out, const TopKResult& r) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) out << ' ';
    out << r[i].label << ':' << fmt(r[i].score);
  }
  out << '\n';
}

const std::map<std::string, TreeKind> kTreeKinds{{"complete", TreeKind::complete},
                                                  {"kmeans", TreeKind::kmeans}};
const std::map<std::string, SynthKind> kSynthKinds{{"multiclass", SynthKind::multiclass},
                                                    {"independent", SynthKind::independent},
                                                    {"dependent", SynthKind::dependent}};

struct TreeOpts {
  TreeKind kind = TreeKind::kmeans;
  std::size_t arity = 2;
  std::size_t max_leaf = 100;
  double kmeans_eps = 1e-4;
  int kmeans_iters = 100;
  std::uint64_t seed = 0;

  TreeConfig config() const {
    TreeConfig c;
    c.kind = kind;
    c.arity = arity;
    c.max_leaf_cluster = max_leaf;
    c.kmeans_epsilon = kmeans_eps;
    c.kmeans_max_iters = kmeans_iters;
    c.seed = seed;
    return c;
  }
};

void add_tree_options(CLI::App* s, TreeOpts& o) {
  s->add_option("--kind", o.kind, "Tree kind")->transform(CLI::CheckedTransformer(kTreeKinds));
  s->add_option("--arity", o.arity, "Node arity")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  s->add_option("--max-leaf", o.max_leaf, "Largest label cluster hung below one node")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  s->add_option("--kmeans-eps", o.kmeans_eps, "k-means convergence tolerance")->check(CLI::PositiveNumber);
  s->add_option("--kmeans-iters", o.kmeans_iters, "k-means iteration cap")->check(CLI::Range(1, 1 << 30));
  s->add_option("--seed", o.seed, "Tree seed");
}

struct LearnOpts {
  std::string loss_name = "logistic";
  double lr = 0.2;
  double eps = 0.001;
  int epochs = 3;
  double prune = 0.1;
  bool normalize = false;
  bool shuffle = false;
  bool feature_normalize = false;
  bool checkpoint = false;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  TrainConfig config() const {
    TrainConfig c;
    c.learning_rate = lr;
    c.adagrad_epsilon = eps;
    c.epochs = epochs;
    c.prune_threshold = prune;
    c.seed = seed;
    c.shuffle = shuffle;
    return c;
  }
  LossKind loss() const { return parse_loss(loss_name); }
  SaveOptions save() const { return {checkpoint, feature_normalize}; }
};

void add_learn_options(CLI::App* s, LearnOpts& o, bool epochs) {
  s->add_option("--loss", o.loss_name, "Node loss")->check(CLI::IsMember({"logistic", "squared_hinge"}));
  s->add_option("--lr", o.lr, "AdaGrad learning rate")->check(CLI::PositiveNumber);
  s->add_option("--adagrad-eps", o.eps, "AdaGrad epsilon")->check(CLI::PositiveNumber);
  if (epochs) s->add_option("--epochs", o.epochs, "Passes over the data")->check(CLI::Range(1, 1 << 20));
  s->add_option("--prune", o.prune, "Drop weights below this magnitude after training")
      ->check(CLI::NonNegativeNumber);
  s->add_flag("--normalize", o.normalize, "Normalize sibling estimates at prediction time");
  s->add_flag("--l2-normalize", o.feature_normalize, "Scale every feature vector to unit length");
  s->add_flag("--checkpoint", o.checkpoint, "Also store AdaGrad state");
  s->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
}

/// Single model or ensemble loaded from a model directory.
struct Predictor {
  std::optional<PLTModel> single;
  std::optional<Ensemble> ensemble;
  bool feature_normalize = false;
  MissingScore missing = MissingScore::zero;

  static Predictor load(const std::string& dir, bool force_normalize) {
    Predictor p;
    if (is_ensemble_dir(dir)) {
      p.ensemble = load_ensemble(dir);
      p.feature_normalize = load_model_dir(fs::path(dir) / "member-0").feature_normalize;
      if (force_normalize)
        for (auto& m : p.ensemble->members) m.normalize_siblings = true;
    } else {
      auto lm = load_model_dir(dir);
      p.single = std::move(lm.model);
      p.feature_normalize = lm.feature_normalize;
      if (force_normalize) p.single->normalize_siblings = true;
    }
    return p;
  }

  const PLTModel& model(const char* what) const {
    if (!single) throw Error(std::string(what) + " needs a single model, not an ensemble");
    return *single;
  }

  void prepare(Dataset& data) const {
    if (feature_normalize) l2_normalize(data);
  }

  TopKResult top_k(const SparseVector& x, std::size_t k, std::size_t beam) const {
    if (ensemble) {
      if (beam) throw Error("beam search needs a single model, not an ensemble");
      return ensemble_predict_top_k(*ensemble, x, k, missing);
    }
    return beam ? predict_beam(*single, x, k, beam) : predict_top_k(*single, x, k);
  }
};

std::vector<double> read_thresholds(const std::string& path, const LabelTree& tree) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<double> t;
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
      throw Error("bad threshold '" + tok + "' in " + path);
    t.push_back(v);
  }
  if (t.size() < tree.label_bound())
    throw RangeError(path + ": " + std::to_string(t.size()) + " thresholds for " +
                     std::to_string(tree.label_bound()) + " labels");
  return t;
}

/// OFO pass over `examples`; returns the final threshold.
double ofo_pass(const PLTModel& model, std::span<const Example> examples) {
  OfoTuner tuner;
  for (const auto& ex : examples) {
    const double tau = tuner.threshold();
    const auto pred = predict_with_thresholds(model, ex.features, NodeThresholds::uniform(model.tree, tau));
    std::vector<LabelId> chosen;
    for (std::size_t i = 0; i < pred.labels.size(); ++i)
      if (pred.scores[i] > tau) chosen.push_back(pred.labels[i]);
    std::size_t hits = 0;
    for (LabelId l : chosen) hits += std::binary_search(ex.labels.begin(), ex.labels.end(), l);
    tuner.observe_counts(hits, chosen.size(), ex.labels.size());
  }
  return tuner.threshold();
}

void print_metric(std::ostream& out, const std::string& name, const MetricValue& v, std::ostream& err) {
  out << name << ' ' << (v.defined ? fmt(v.value) : std::string("nan")) << '\n';
  if (!v.defined) err << "warning: " << name << " is undefined on this data\n";
  if (v.undefined_labels)
    err << "note: " << v.undefined_labels << " labels with an undefined value left out of the mean\n";
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic label trees for extreme multi-label classification", "pltxc"};
  app.require_subcommand(1);

  // build-tree
  auto* bt = app.add_subcommand("build-tree", "Build a label tree from a training set");
  std::string bt_in, bt_out;
  TreeOpts bt_opts;
  bt->add_option("--input,-i", bt_in, "Dataset file (- for stdin)")->required();
  bt->add_option("--output,-o", bt_out, "Tree file (default stdout)");
  add_tree_options(bt, bt_opts);

  // train
  auto* tr = app.add_subcommand("train", "Train a PLT or a pick-one-label HSM");
  std::string tr_in, tr_model, tr_tree, tr_mode = "plt";
  TreeOpts tr_tree_opts;
  LearnOpts tr_learn;
  tr->add_option("--input,-i", tr_in, "Training dataset")->required();
  tr->add_option("--model,-m", tr_model, "Output model directory")->required();
  tr->add_option("--tree", tr_tree, "Use this tree file instead of building one");
  tr->add_option("--tree-kind", tr_tree_opts.kind, "Tree kind when building")
      ->transform(CLI::CheckedTransformer(kTreeKinds));
  tr->add_option("--arity", tr_tree_opts.arity, "Tree arity when building")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  tr->add_option("--max-leaf", tr_tree_opts.max_leaf, "k-means leaf cluster size")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  tr->add_option("--seed", tr_learn.seed, "Seed for tree building and shuffling");
  tr->add_flag("--shuffle", tr_learn.shuffle, "Reshuffle examples every epoch");
  tr->add_option("--mode", tr_mode, "plt or hsm-pol")->check(CLI::IsMember({"plt", "hsm-pol"}));
  add_learn_options(tr, tr_learn, true);

  // ensemble-train
  auto* et = app.add_subcommand("ensemble-train", "Train several PLTs on differently seeded trees");
  std::string et_in, et_model;
  std::size_t et_members = 3;
  TreeOpts et_tree_opts;
  LearnOpts et_learn;
  et->add_option("--input,-i", et_in, "Training dataset")->required();
  et->add_option("--model,-m", et_model, "Output ensemble directory")->required();
  et->add_option("--members", et_members, "Number of trees")->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  et->add_option("--tree-kind", et_tree_opts.kind, "Tree kind")->transform(CLI::CheckedTransformer(kTreeKinds));
  et->add_option("--arity", et_tree_opts.arity, "Tree arity")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  et->add_option("--max-leaf", et_tree_opts.max_leaf, "k-means leaf cluster size")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  et->add_option("--seed", et_learn.seed, "Base seed");
  et->add_flag("--shuffle", et_learn.shuffle, "Reshuffle examples every epoch");
  add_learn_options(et, et_learn, true);

  // online-train
  auto* ot = app.add_subcommand("online-train", "Grow a complete tree and its models over a stream");
  std::string ot_in, ot_model;
  std::size_t ot_arity = 2, ot_passes = 1, ot_every = 0;
  LearnOpts ot_learn;
  ot->add_option("--input,-i", ot_in, "Stream dataset")->required();
  ot->add_option("--model,-m", ot_model, "Output model directory")->required();
  ot->add_option("--arity", ot_arity, "Tree arity")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  ot->add_option("--passes", ot_passes, "Passes over the stream")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  ot->add_option("--snapshot-every", ot_every, "Save a snapshot every N examples (0: never)");
  add_learn_options(ot, ot_learn, false);
  ot_learn.prune = 0.0;

  // predict
  auto* pr = app.add_subcommand("predict", "Predict labels for a dataset");
  std::string pr_in, pr_model, pr_out, pr_thr_file, pr_missing = "zero";
  std::size_t pr_k = 5, pr_beam = 0;
  std::optional<double> pr_tau;
  bool pr_normalize = false;
  pr->add_option("--input,-i", pr_in, "Dataset (labels are ignored)")->required();
  pr->add_option("--model,-m", pr_model, "Model or ensemble directory")->required();
  pr->add_option("--output,-o", pr_out, "Prediction file (default stdout)");
  auto* pr_k_opt = pr->add_option("--top-k,-k", pr_k, "Number of labels")->check(CLI::PositiveNumber);
  auto* pr_tf = pr->add_option("--thresholds-file", pr_thr_file, "Per-label thresholds, one per line");
  auto* pr_t = pr->add_option("--threshold", pr_tau, "One threshold for every label")->check(CLI::Range(0.0, 1.0));
  pr->add_option("--beam", pr_beam, "Beam width (0: exact search)");
  pr->add_flag("--normalize", pr_normalize, "Normalize sibling estimates");
  pr->add_option("--ensemble-missing", pr_missing, "Score of a label missing from a member's list")
      ->check(CLI::IsMember({"zero", "path"}));
  pr_tf->excludes(pr_t);
  pr_tf->excludes(pr_k_opt);
  pr_t->excludes(pr_k_opt);

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Evaluate a model on a labeled dataset");
  std::string ev_in, ev_model, ev_metric = "p@k", ev_thr_file, ev_avg = "macro";
  std::size_t ev_k = 5, ev_beam = 0;
  double ev_tau = 0.5, ev_beta = 1.0, ev_frac = 0.3;
  bool ev_ofo = false, ev_normalize = false;
  ev->add_option("--input,-i", ev_in, "Labeled dataset")->required();
  ev->add_option("--model,-m", ev_model, "Model or ensemble directory")->required();
  ev->add_option("--metric", ev_metric, "p@k, r@k, hamming, microf1, macrof1, fbeta, jaccard or am")
      ->check(CLI::IsMember({"p@k", "r@k", "hamming", "microf1", "macrof1", "fbeta", "jaccard", "am"}));
  ev->add_option("--k", ev_k, "k for p@k and r@k")->check(CLI::PositiveNumber);
  ev->add_option("--beam", ev_beam, "Beam width for p@k and r@k (0: exact search)");
  auto* ev_t = ev->add_option("--threshold", ev_tau, "Uniform threshold")->check(CLI::Range(0.0, 1.0));
  auto* ev_tf = ev->add_option("--thresholds-file", ev_thr_file, "Per-label thresholds");
  auto* ev_o = ev->add_flag("--ofo", ev_ofo, "Tune one threshold with OFO on a leading fraction of the input");
  ev->add_option("--ofo-fraction", ev_frac, "Share of the input used for tuning")->check(CLI::Range(0.0, 1.0));
  ev->add_option("--beta", ev_beta, "beta of fbeta")->check(CLI::PositiveNumber);
  ev->add_option("--average", ev_avg, "macro or micro, for hamming, fbeta, jaccard and am")
      ->check(CLI::IsMember({"macro", "micro"}));
  ev->add_flag("--normalize", ev_normalize, "Normalize sibling estimates");
  ev_t->excludes(ev_tf);
  ev_o->excludes(ev_t);
  ev_o->excludes(ev_tf);

  // tune-thresholds
  auto* tt = app.add_subcommand("tune-thresholds", "Tune a uniform threshold with OFO and write it per label");
  std::string tt_in, tt_model, tt_out;
  tt->add_option("--input,-i", tt_in, "Labeled tuning dataset")->required();
  tt->add_option("--model,-m", tt_model, "Model directory")->required();
  tt->add_option("--output,-o", tt_out, "Thresholds file")->required();

  // synth
  auto* sy = app.add_subcommand("synth", "Generate synthetic data");
  SynthConfig sy_cfg;
  std::string sy_out, sy_test, sy_oracle;
  sy->add_option("--kind", sy_cfg.kind, "multiclass, independent or dependent")
      ->transform(CLI::CheckedTransformer(kSynthKinds));
  sy->add_option("--d", sy_cfg.d, "Feature dimension")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  sy->add_option("--m", sy_cfg.m, "Number of labels")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  sy->add_option("--n", sy_cfg.n, "Number of examples");
  sy->add_option("--seed", sy_cfg.seed, "Seed");
  sy->add_option("--noise-sd", sy_cfg.noise_sd, "Noise standard deviation (dependent)")->check(CLI::NonNegativeNumber);
  sy->add_option("--oracle-samples", sy_cfg.oracle_samples, "Noise draws per oracle query (dependent)")
      ->check(CLI::PositiveNumber);
  sy->add_option("--output,-o", sy_out, "Dataset file (default stdout)");
  sy->add_option("--test-output", sy_test, "Put the second half here instead");
  sy->add_option("--oracle", sy_oracle, "Write true label probabilities, one line per example");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (*bt) {
    const Dataset data = read_dataset_file(bt_in);
    const LabelTree tree = build_tree(data, bt_opts.config());
    Output o(bt_out, out);
    write_tree(tree, *o);
    o.finish(bt_out);
    const auto st = tree_stats(tree);
    err << "tree: " << tree.size() << " nodes, " << st.num_leaves << " leaves, depth " << st.depth << '\n';
    return 0;
  }

  if (*tr) {
    Dataset data = read_dataset_file(tr_in);
    if (tr_learn.feature_normalize) l2_normalize(data);
    LabelTree tree;
    if (!tr_tree.empty()) {
      std::ifstream in(tr_tree);
      if (!in) throw Error("cannot open " + tr_tree);
      tree = read_tree(in);
    } else {
      tr_tree_opts.seed = tr_learn.seed;
      tree = build_tree(data, tr_tree_opts.config());
    }
    if (auto v = validate_tree(tree, data.num_labels); !v)
      throw TreeError("tree does not fit the dataset: " + v.message);
    const TrainConfig cfg = tr_learn.config();
    PLTModel model = tr_mode == "hsm-pol" ? hsm_train(tree, data, cfg, tr_learn.loss())
                     : tr_learn.threads > 1 ? train_per_node(tree, data, cfg, tr_learn.loss(), tr_learn.threads)
                                            : train(tree, data, cfg, tr_learn.loss());
    if (tr_learn.normalize) model.normalize_siblings = true;
    prune_model(model, cfg.prune_threshold);
    save_model(model, tr_model, tr_learn.save());
    err << "trained " << tree.size() << " nodes on " << data.examples.size() << " examples\n";
    return 0;
  }

  if (*et) {
    Dataset data = read_dataset_file(et_in);
    if (et_learn.feature_normalize) l2_normalize(data);
    et_tree_opts.seed = et_learn.seed;
    Ensemble ens = train_ensemble(data, et_members, et_tree_opts.config(), et_learn.config(), et_learn.loss(),
                                  et_learn.threads);
    for (auto& m : ens.members) {
      if (et_learn.normalize) m.normalize_siblings = true;
      prune_model(m, et_learn.prune);
    }
    save_ensemble(ens, et_model, et_learn.save());
    err << "trained " << et_members << " members\n";
    return 0;
  }

  if (*ot) {
    Dataset data = read_dataset_file(ot_in);
    if (ot_learn.feature_normalize) l2_normalize(data);
    OnlineState state = make_complete_tree_oplt(ot_arity, ot_learn.config(), ot_learn.loss());
    auto finish = [&](PLTModel m, const fs::path& dir) {
      if (ot_learn.normalize) m.normalize_siblings = true;
      prune_model(m, ot_learn.prune);
      save_model(m, dir, ot_learn.save());
    };
    for (std::size_t pass = 0; pass < ot_passes; ++pass) {
      for (const auto& ex : data.examples) {
        state.process(ex);
        if (ot_every && state.examples_seen() % ot_every == 0)
          finish(state.snapshot(), fs::path(ot_model) / ("snapshot-" + std::to_string(state.examples_seen())));
      }
    }
    finish(state.snapshot(), ot_model);
    const auto& c = state.counters();
    out << "examples " << state.examples_seen() << "\nnodes " << state.tree().size() << "\nlabels "
        << state.tree().num_labels() << "\nregular_updates " << c.regular_updates << "\nauxiliary_updates "
        << c.auxiliary_updates << '\n';
    return 0;
  }

  if (*pr) {
    Predictor p = Predictor::load(pr_model, pr_normalize);
    p.missing = pr_missing == "path" ? MissingScore::path : MissingScore::zero;
    Dataset data = read_dataset_file(pr_in);
    p.prepare(data);
    Output o(pr_out, out);
    if (!pr_thr_file.empty() || pr_tau) {
      const PLTModel& m = p.model("threshold prediction");
      const NodeThresholds tau = pr_tau ? NodeThresholds::uniform(m.tree, *pr_tau)
                                        : NodeThresholds(m.tree, read_thresholds(pr_thr_file, m.tree));
      for (const auto& ex : data.examples) {
        const auto r = predict_with_thresholds(m, ex.features, tau);
        TopKResult scored;
        for (std::size_t i = 0; i < r.labels.size(); ++i) scored.push_back({r.labels[i], r.scores[i]});
        write_scored(*o, scored);
      }
    } else {
      for (const auto& ex : data.examples) write_scored(*o, p.top_k(ex.features, pr_k, pr_beam));
    }
    o.finish(pr_out);
    return 0;
  }

  if (*ev) {
    Predictor p = Predictor::load(ev_model, ev_normalize);
    Dataset data = read_dataset_file(ev_in);
    p.prepare(data);
    std::vector<std::vector<LabelId>> truths;
    if (ev_metric == "p@k" || ev_metric == "r@k") {
      std::vector<TopKResult> preds;
      for (const auto& ex : data.examples) {
        preds.push_back(p.top_k(ex.features, ev_k, ev_beam));
        truths.push_back(ex.labels);
      }
      const double v = ev_metric == "p@k" ? precision_at_k(preds, truths, ev_k) : recall_at_k(preds, truths, ev_k);
      out << (ev_metric == "p@k" ? "p@" : "r@") << ev_k << ' ' << fmt(v) << '\n';
      return 0;
    }
    const PLTModel& m = p.model("threshold metrics");
    std::span<const Example> eval_set = data.examples;
    std::optional<NodeThresholds> tau;
    if (ev_ofo) {
      const auto cut = static_cast<std::size_t>(std::ceil(ev_frac * static_cast<double>(data.examples.size())));
      const double t = ofo_pass(m, eval_set.first(cut));
      eval_set = eval_set.subspan(cut);
      out << "threshold " << fmt(t) << '\n';
      tau.emplace(NodeThresholds::uniform(m.tree, t));
    } else if (!ev_thr_file.empty()) {
      tau.emplace(m.tree, read_thresholds(ev_thr_file, m.tree));
    } else {
      tau.emplace(NodeThresholds::uniform(m.tree, ev_tau));
    }
    ConfusionCounts counts(std::max<std::size_t>(data.num_labels, m.tree.label_bound()));
    for (const auto& ex : eval_set) counts.add(predict_with_thresholds(m, ex.features, *tau).labels, ex.labels);
    MetricSpec spec;
    spec.beta = ev_beta;
    spec.averaging = ev_avg == "micro" ? Averaging::micro : Averaging::macro;
    if (ev_metric == "hamming") spec.kind = MetricKind::hamming;
    if (ev_metric == "jaccard") spec.kind = MetricKind::jaccard;
    if (ev_metric == "am") spec.kind = MetricKind::am;
    if (ev_metric == "microf1" || ev_metric == "macrof1") {
      spec.kind = MetricKind::f_beta;
      spec.beta = 1.0;
      spec.averaging = ev_metric == "microf1" ? Averaging::micro : Averaging::macro;
    }
    print_metric(out, ev_metric, evaluate_generalized(counts, spec), err);
    return 0;
  }

  if (*tt) {
    auto lm = load_model_dir(tt_model);
    Dataset data = read_dataset_file(tt_in);
    if (lm.feature_normalize) l2_normalize(data);
    const double t = ofo_pass(lm.model, data.examples);
    Output o(tt_out, out);
    const std::size_t m = std::max<std::size_t>(data.num_labels, lm.model.tree.label_bound());
    for (std::size_t j = 0; j < m; ++j) *o << fmt(t) << '\n';
    o.finish(tt_out);
    out << "threshold " << fmt(t) << '\n';
    return 0;
  }

  if (*sy) {
    const SynthData sd = generate_synth(sy_cfg);
    if (sy_test.empty()) {
      Output o(sy_out, out);
      serialize_dataset(sd.dataset, *o);
      o.finish(sy_out);
    } else {
      auto [train_set, test_set] = split_half(sd.dataset);
      Output o(sy_out, out);
      serialize_dataset(train_set, *o);
      o.finish(sy_out);
      Output t(sy_test, out);
      serialize_dataset(test_set, *t);
      t.finish(sy_test);
    }
    if (!sy_oracle.empty()) {
      Output o(sy_oracle, out);
      const std::uint64_t base = derive_seed(sy_cfg.seed, 2);
      for (std::size_t i = 0; i < sd.points.size(); ++i) {
        const auto eta = sd.model.marginals(sd.points[i], derive_seed(base, i));
        for (std::size_t j = 0; j < eta.size(); ++j) *o << (j ? " " : "") << fmt(eta[j]);
        *o << '\n';
      }
      o.finish(sy_oracle);
    }
    return 0;
  }
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace plt::cli
