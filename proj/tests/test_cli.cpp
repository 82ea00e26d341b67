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

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "plt/cli.hpp"
#include "plt/ensemble.hpp"
#include "plt/errors.hpp"
#include "plt/metrics.hpp"
#include "plt/model_io.hpp"
#include "plt/synth.hpp"

using namespace plt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("pltxc-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run pltxc(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double metric_value(const std::string& out, const std::string& name) {
  std::istringstream in(out);
  std::string key;
  double v = 0;
  while (in >> key) {
    if (key == name) {
      in >> v;
      return v;
    }
    std::string rest;
    std::getline(in, rest);
  }
  FAIL("metric missing: " << name << " in " << out);
  return v;
}

PLTModel small_model(std::uint64_t seed) {
  SynthConfig sc;
  sc.kind = SynthKind::independent;
  sc.n = 800;
  sc.m = 12;
  sc.seed = seed;
  const Dataset d = generate_synth(sc).dataset;
  TreeConfig tc;
  tc.max_leaf_cluster = 3;
  tc.seed = seed;
  return train(build_tree(d, tc), d, TrainConfig{}, LossKind::logistic);
}

PLTModel constant_model(LabelTree tree, const std::vector<double>& probs) {
  PLTModel m = PLTModel::fresh(std::move(tree), LossKind::squared_hinge);
  for (NodeId v = 0; v < m.tree.size(); ++v) m.models[v].set_bias({2.0 * probs[v] - 1.0, 0.0});
  return m;
}

LabelTree two_label_tree() {
  LabelTree t;
  t.add_child(0);
  t.add_child(0);
  t.assign_label(1, 0);
  t.assign_label(2, 1);
  return t;
}

const SparseVector kX = SparseVector::from_entries({{0, 1.0}});

}  // namespace

TEST_SUITE("io") {

TEST_CASE("model round trip with and without checkpoint") {
  TempDir tmp;
  const PLTModel m = small_model(1);
  save_model(m, tmp / "ckpt", {.checkpoint = true});
  save_model(m, tmp / "plain");
  const LoadedModel ck = load_model_dir(tmp / "ckpt");
  CHECK(ck.checkpoint);
  CHECK(ck.model.tree == m.tree);
  CHECK(ck.model.models == m.models);
  const PLTModel plain = load_model(tmp / "plain");
  REQUIRE(plain.models.size() == m.models.size());
  for (NodeId v = 0; v < m.tree.size(); ++v) {
    CHECK(plain.models[v].sorted_params().size() == m.models[v].sorted_params().size());
    CHECK(plain.models[v].bias().weight == m.models[v].bias().weight);
  }
  Rng rng(2);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    const auto x = SparseVector::from_dense(std::vector<double>{g(rng), g(rng), g(rng)});
    CHECK(predict_top_k(plain, x, 4) == predict_top_k(m, x, 4));
  }
}

TEST_CASE("a fresh model survives a round trip") {
  TempDir tmp;
  const PLTModel m = PLTModel::fresh(two_label_tree(), LossKind::squared_hinge);
  save_model(m, tmp / "m", {.checkpoint = true});
  const PLTModel back = load_model(tmp / "m");
  CHECK(back.models == m.models);
  CHECK(back.loss == LossKind::squared_hinge);
}

TEST_CASE("damaged model directories are rejected") {
  TempDir tmp;
  const PLTModel m = small_model(3);
  save_model(m, tmp / "m", {.checkpoint = true});
  const std::string weights = slurp(tmp / "m/weights.bin");
  const std::string meta = slurp(tmp / "m/meta.txt");

  CHECK_THROWS_AS(load_model(tmp / "absent"), ModelFormatError);

  std::ofstream(tmp / "m/weights.bin", std::ios::binary) << weights.substr(0, weights.size() - 3);
  CHECK_THROWS_AS(load_model(tmp / "m"), ModelFormatError);

  std::ofstream(tmp / "m/weights.bin", std::ios::binary) << weights << "x";
  CHECK_THROWS_AS(load_model(tmp / "m"), ModelFormatError);

  std::ofstream(tmp / "m/weights.bin", std::ios::binary) << weights;
  CHECK(load_model(tmp / "m").models == m.models);

  std::string v2 = meta;
  v2.replace(v2.find("version 1"), 9, "version 2");
  std::ofstream(tmp / "m/meta.txt") << v2;
  CHECK_THROWS_AS(load_model(tmp / "m"), ModelFormatError);

  // a NaN weight in the first record
  std::ofstream(tmp / "m/meta.txt") << meta;
  std::string nan = weights;
  const double bad = std::numeric_limits<double>::quiet_NaN();
  std::memcpy(nan.data() + 8, &bad, sizeof bad);
  std::ofstream(tmp / "m/weights.bin", std::ios::binary) << nan;
  CHECK_THROWS_AS(load_model(tmp / "m"), ModelFormatError);
}

}  // TEST_SUITE

TEST_SUITE("ensemble") {

TEST_CASE("one member reproduces its own predictions") {
  const PLTModel m = small_model(4);
  const Ensemble e{{m}};
  Rng rng(5);
  std::normal_distribution<double> g;
  for (int i = 0; i < 30; ++i) {
    const auto x = SparseVector::from_dense(std::vector<double>{g(rng), g(rng), g(rng)});
    CHECK(ensemble_predict_top_k(e, x, 3) == predict_top_k(m, x, 3));
    CHECK(ensemble_predict_top_k(e, x, 3, MissingScore::path) == predict_top_k(m, x, 3));
  }
}

TEST_CASE("identical members change nothing") {
  const PLTModel m = small_model(6);
  const Ensemble e{{m, m, m}};
  const auto x = SparseVector::from_dense(std::vector<double>{0.2, -0.4, 0.1});
  CHECK(ensemble_predict_top_k(e, x, 5) == predict_top_k(m, x, 5));
}

TEST_CASE("averaging over members") {
  const Ensemble e{{constant_model(two_label_tree(), {1.0, 0.8, 0.3}),
                    constant_model(two_label_tree(), {1.0, 0.6, 0.9})}};
  const auto both = ensemble_predict_top_k(e, kX, 2);
  REQUIRE(both.size() == 2);
  CHECK(both[0].label == 0);
  CHECK(both[0].score == doctest::Approx(0.7));
  CHECK(both[1].score == doctest::Approx(0.6));

  const auto zero = ensemble_predict_top_k(e, kX, 1);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].label == 1);
  CHECK(zero[0].score == doctest::Approx(0.45));

  const auto path = ensemble_predict_top_k(e, kX, 1, MissingScore::path);
  CHECK(path[0].label == 0);
  CHECK(path[0].score == doctest::Approx(0.7));
}

TEST_CASE("ensemble training and storage") {
  SynthConfig sc;
  sc.n = 600;
  sc.m = 10;
  const Dataset d = generate_synth(sc).dataset;
  TreeConfig tc;
  tc.max_leaf_cluster = 3;
  const Ensemble a = train_ensemble(d, 3, tc, TrainConfig{}, LossKind::logistic, 1);
  const Ensemble b = train_ensemble(d, 3, tc, TrainConfig{}, LossKind::logistic, 3);
  REQUIRE(a.members.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.members[i].tree == b.members[i].tree);
    CHECK(a.members[i].models == b.members[i].models);
  }
  TempDir tmp;
  save_ensemble(a, tmp / "e", {.checkpoint = true});
  CHECK(is_ensemble_dir(tmp / "e"));
  const Ensemble back = load_ensemble(tmp / "e");
  REQUIRE(back.members.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back.members[i].models == a.members[i].models);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("synth output is deterministic") {
  TempDir tmp;
  const std::vector<std::string> base{"synth", "--kind", "dependent", "--m", "6", "--n", "50", "--seed", "3"};
  auto a = base, b = base;
  a.insert(a.end(), {"-o", tmp / "a.txt"});
  b.insert(b.end(), {"-o", tmp / "b.txt"});
  REQUIRE(pltxc(a).code == 0);
  REQUIRE(pltxc(b).code == 0);
  CHECK(slurp(tmp / "a.txt") == slurp(tmp / "b.txt"));
  CHECK(!slurp(tmp / "a.txt").empty());
}

TEST_CASE("bad arguments fail with a message") {
  const Run unknown = pltxc({"train", "--no-such-flag"});
  CHECK(unknown.code != 0);
  CHECK(!unknown.err.empty());
  CHECK(pltxc({}).code != 0);
  CHECK(pltxc({"predict", "-i", "x"}).code != 0);
  const Run missing = pltxc({"predict", "-i", "/nonexistent/data", "-m", "/nonexistent/model"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("error:") != std::string::npos);
}

TEST_CASE("train, predict, evaluate and tune") {
  TempDir tmp;
  REQUIRE(pltxc({"synth", "--kind", "independent", "--m", "16", "--n", "4000", "--seed", "11", "-o",
                 tmp / "train.txt", "--test-output", tmp / "test.txt"})
              .code == 0);
  REQUIRE(pltxc({"train", "-i", tmp / "train.txt", "-m", tmp / "model", "--max-leaf", "4"}).code == 0);

  const Run pred = pltxc({"predict", "-i", tmp / "test.txt", "-m", tmp / "model", "-k", "3"});
  REQUIRE(pred.code == 0);
  std::istringstream lines(pred.out);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    ++count;
    CHECK(std::count(line.begin(), line.end(), ':') == 3);
  }
  CHECK(count == 2000);

  // better than always answering the most frequent training label
  std::ifstream tr(tmp / "train.txt"), te(tmp / "test.txt");
  const Dataset train_set = parse_dataset(tr), test_set = parse_dataset(te);
  const auto freq = label_frequencies(train_set);
  const LabelId top = static_cast<LabelId>(std::max_element(freq.begin(), freq.end()) - freq.begin());
  double hits = 0;
  for (const auto& ex : test_set.examples) hits += std::binary_search(ex.labels.begin(), ex.labels.end(), top);
  const double baseline = hits / test_set.size();
  const Run ev = pltxc({"evaluate", "-i", tmp / "test.txt", "-m", tmp / "model", "--metric", "p@k", "--k", "1"});
  REQUIRE(ev.code == 0);
  CHECK(metric_value(ev.out, "p@1") > baseline);

  const Run f1 = pltxc({"evaluate", "-i", tmp / "test.txt", "-m", tmp / "model", "--metric", "microf1", "--ofo"});
  REQUIRE(f1.code == 0);
  const double tau = metric_value(f1.out, "threshold");
  CHECK(tau > 0.0);
  CHECK(tau < 0.5);
  CHECK(metric_value(f1.out, "microf1") > 0.0);

  REQUIRE(pltxc({"tune-thresholds", "-i", tmp / "train.txt", "-m", tmp / "model", "-o", tmp / "tau.txt"}).code == 0);
  std::ifstream tin(tmp / "tau.txt");
  std::size_t taus = 0;
  for (double t; tin >> t; ++taus) CHECK((t >= 0.0 && t <= 1.0));
  CHECK(taus == 16);
  const Run thr = pltxc({"predict", "-i", tmp / "test.txt", "-m", tmp / "model", "--thresholds-file", tmp / "tau.txt"});
  CHECK(thr.code == 0);
}

TEST_CASE("online and ensemble training from the command line") {
  TempDir tmp;
  REQUIRE(pltxc({"synth", "--kind", "multiclass", "--m", "9", "--n", "600", "-o", tmp / "d.txt"}).code == 0);
  const Run on = pltxc({"online-train", "-i", tmp / "d.txt", "-m", tmp / "online", "--arity", "3",
                        "--snapshot-every", "300"});
  REQUIRE(on.code == 0);
  CHECK(metric_value(on.out, "examples") == 600);
  CHECK(metric_value(on.out, "labels") == 9);
  CHECK(fs::exists(tmp / "online/snapshot-300/weights.bin"));
  CHECK(pltxc({"predict", "-i", tmp / "d.txt", "-m", tmp / "online", "-k", "2"}).code == 0);

  REQUIRE(pltxc({"ensemble-train", "-i", tmp / "d.txt", "-m", tmp / "ens", "--members", "2"}).code == 0);
  const Run ev = pltxc({"evaluate", "-i", tmp / "d.txt", "-m", tmp / "ens", "--metric", "p@k", "--k", "1"});
  REQUIRE(ev.code == 0);
  CHECK(metric_value(ev.out, "p@1") > 1.0 / 9);
}

}  // TEST_SUITE
