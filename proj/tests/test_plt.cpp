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

#include "oracles.hpp"
#include "plt/errors.hpp"
#include "plt/plt.hpp"

using namespace plt;

namespace {

// 0 -> {1, 2}, 1 -> {3, 4}, 2 -> {5, 6}; leaves 3..6 carry labels 0..3.
LabelTree seven_node_tree() {
  LabelTree t;
  for (NodeId p : {0u, 0u, 1u, 1u, 2u, 2u}) t.add_child(p);
  for (LabelId l = 0; l < 4; ++l) t.assign_label(3 + l, l);
  return t;
}

Dataset random_dataset(std::size_t n, std::size_t f, std::size_t m, Rng& rng) {
  Dataset d;
  d.num_features = f;
  d.num_labels = m;
  for (std::size_t i = 0; i < n; ++i) {
    Example ex;
    ex.features = oracle::random_sparse(f, 1 + rng() % 6, rng);
    std::set<LabelId> ls;
    const std::size_t k = rng() % 4;
    for (std::size_t j = 0; j < k; ++j) ls.insert(static_cast<LabelId>(rng() % m));
    ex.labels.assign(ls.begin(), ls.end());
    d.examples.push_back(std::move(ex));
  }
  return d;
}

std::vector<LabelId> random_labels(std::size_t m, Rng& rng) {
  std::set<LabelId> s;
  const std::size_t k = rng() % (std::min<std::size_t>(m, 8) + 1);
  for (std::size_t i = 0; i < k; ++i) s.insert(static_cast<LabelId>(rng() % m));
  return {s.begin(), s.end()};
}

}  // namespace

TEST_SUITE("plt") {

TEST_CASE("node assignment on the seven-node tree") {
  const LabelTree t = seven_node_tree();
  const std::vector<LabelId> one{0};
  const auto a = assign_to_nodes(t, one);
  CHECK(a.positives == std::vector<NodeId>{0, 1, 3});
  CHECK(a.negatives == std::vector<NodeId>{2, 4});

  const auto empty = assign_to_nodes(t, {});
  CHECK(empty.positives.empty());
  CHECK(empty.negatives == std::vector<NodeId>{0});

  const std::vector<LabelId> all{0, 1, 2, 3};
  const auto full = assign_to_nodes(t, all);
  CHECK(full.positives.size() == 7);
  CHECK(full.negatives.empty());

  const std::vector<LabelId> unknown{9};
  CHECK_THROWS_AS(assign_to_nodes(t, unknown), RangeError);
}

TEST_CASE("training cost on the seven-node tree") {
  const LabelTree t = seven_node_tree();
  const std::vector<LabelId> one{2};
  CHECK(training_cost(t, one) == 5);
  CHECK(training_cost(t, {}) == 1);
  const auto st = tree_stats(t);
  CHECK(training_cost(t, one) == 1 + 1 * st.depth * st.max_degree);
}

TEST_CASE("node assignment agrees with the set definition on random trees") {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 1 + rng() % 50;
    const LabelTree t = oracle::random_tree(m, 2 + rng() % 5, rng);
    const auto labels = random_labels(m, rng);
    const auto a = assign_to_nodes(t, labels);
    CHECK(a == oracle::node_sets(t, labels));
    CHECK(a.positives.size() + a.negatives.size() == training_cost(t, labels));
    const auto st = tree_stats(t);
    CHECK(training_cost(t, labels) <= 1 + labels.size() * st.depth * st.max_degree);
    for (NodeId v : a.negatives) {
      const NodeId p = t.node(v).parent;
      CHECK((p == kNoNode || std::binary_search(a.positives.begin(), a.positives.end(), p)));
    }
  }
}

TEST_CASE("one example with one label updates three nodes up and two down") {
  Dataset d;
  d.num_features = 2;
  d.num_labels = 4;
  d.examples.push_back({SparseVector::from_entries({{0, 1.0}}), {0}});
  TrainConfig cfg;
  cfg.epochs = 1;
  const PLTModel m = train(seven_node_tree(), d, cfg, LossKind::logistic);
  for (NodeId v : {0u, 1u, 3u}) {
    CHECK(m.models[v].update_count() == 1);
    CHECK(m.models[v].bias().weight > 0.0);
  }
  for (NodeId v : {2u, 4u}) {
    CHECK(m.models[v].update_count() == 1);
    CHECK(m.models[v].bias().weight < 0.0);
  }
  CHECK(m.models[5].update_count() == 0);
  CHECK(m.models[6].update_count() == 0);
  CHECK(m.total_updates() == 5);
}

TEST_CASE("examples carrying every label only push nodes up") {
  Rng rng(2);
  Dataset d;
  d.num_features = 10;
  d.num_labels = 4;
  for (int i = 0; i < 20; ++i) d.examples.push_back({oracle::random_sparse(10, 3, rng), {0, 1, 2, 3}});
  TrainConfig cfg;
  const PLTModel m = train(seven_node_tree(), d, cfg, LossKind::logistic);
  NodeModel expect;
  for (int e = 0; e < cfg.epochs; ++e)
    for (const auto& ex : d.examples) expect.update(ex.features, 1, cfg);
  for (const auto& nm : m.models) CHECK(nm == expect);
}

TEST_CASE("training is deterministic") {
  Rng rng(4);
  const Dataset d = random_dataset(200, 30, 20, rng);
  const LabelTree t = oracle::random_tree(20, 3, rng);
  TrainConfig cfg;
  cfg.shuffle = true;
  cfg.seed = 99;
  const PLTModel a = train(t, d, cfg, LossKind::logistic);
  const PLTModel b = train(t, d, cfg, LossKind::logistic);
  CHECK(a.models == b.models);
}

TEST_CASE("per-node training equals the interleaved schedule") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = 2 + rng() % 30;
    const Dataset d = random_dataset(150, 25, m, rng);
    const LabelTree t = oracle::random_tree(m, 4, rng);
    TrainConfig cfg;
    cfg.shuffle = trial % 2 == 1;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const LossKind loss = trial % 3 == 0 ? LossKind::squared_hinge : LossKind::logistic;
    const PLTModel a = train(t, d, cfg, loss);
    CHECK(train_per_node(t, d, cfg, loss, 1).models == a.models);
    CHECK(train_per_node(t, d, cfg, loss, 4).models == a.models);
  }
}

TEST_CASE("streaming training") {
  Rng rng(6);
  const Dataset d = random_dataset(100, 20, 12, rng);
  const LabelTree t = oracle::random_tree(12, 3, rng);
  TrainConfig cfg;
  cfg.epochs = 1;
  CHECK(train_online_stream(t, d.examples, cfg, LossKind::logistic).models ==
        train(t, d, cfg, LossKind::logistic).models);
  CHECK(train_online_stream(t, {}, cfg, LossKind::logistic).models ==
        PLTModel::fresh(t, LossKind::logistic).models);
  Dataset bad = d;
  bad.examples[3].labels = {40};
  CHECK_THROWS_AS(train_online_stream(t, bad.examples, cfg, LossKind::logistic), RangeError);
  bad.num_labels = 41;
  CHECK_THROWS_AS(train(t, bad, cfg, LossKind::logistic), RangeError);
}

TEST_CASE("epoch order") {
  TrainConfig cfg;
  CHECK(epoch_order(4, cfg, 0) == std::vector<std::size_t>{0, 1, 2, 3});
  cfg.shuffle = true;
  auto o = epoch_order(100, cfg, 1);
  CHECK(o != epoch_order(100, cfg, 2));
  std::sort(o.begin(), o.end());
  for (std::size_t i = 0; i < o.size(); ++i) CHECK(o[i] == i);
}

TEST_CASE("worker failures surface in the caller") {
  Dataset d;
  d.num_features = 1;
  d.num_labels = 4;
  d.examples.push_back({SparseVector::from_entries({{0, 1e300}}), {1}});
  CHECK_THROWS_AS(train_per_node(seven_node_tree(), d, TrainConfig{}, LossKind::logistic, 3), TrainingDiverged);
}

}  // TEST_SUITE
