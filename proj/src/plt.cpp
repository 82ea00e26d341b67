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

#include "plt/plt.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "plt/errors.hpp"
#include "plt/random.hpp"

namespace plt {

PLTModel PLTModel::fresh(LabelTree tree, LossKind loss) {
  PLTModel m;
  m.models.assign(tree.size(), NodeModel(loss));
  m.tree = std::move(tree);
  m.loss = loss;
  return m;
}

std::uint64_t PLTModel::total_updates() const noexcept {
  std::uint64_t n = 0;
  for (const auto& m : models) n += m.update_count();
  return n;
}

NodeAssignment assign_to_nodes(const LabelTree& tree, std::span<const LabelId> labels) {
  std::unordered_set<NodeId> positive;
  std::unordered_set<NodeId> negative{tree.root()};
  for (LabelId j : labels) {
    NodeId v = tree.leaf(j);
    // Walk up until the root or the first node already marked positive.
    while (v != kNoNode && !positive.contains(v)) {
      positive.insert(v);
      negative.erase(v);
      for (NodeId c : tree.node(v).children)
        if (!positive.contains(c)) negative.insert(c);
      v = tree.node(v).parent;
    }
  }
  NodeAssignment a;
  a.positives.assign(positive.begin(), positive.end());
  a.negatives.assign(negative.begin(), negative.end());
  std::sort(a.positives.begin(), a.positives.end());
  std::sort(a.negatives.begin(), a.negatives.end());
  return a;
}

std::size_t training_cost(const LabelTree& tree, std::span<const LabelId> labels) {
  std::unordered_set<NodeId> positive;
  for (LabelId j : labels)
    for (NodeId v : path_to_root(tree, tree.leaf(j))) positive.insert(v);
  std::size_t cost = 1;
  for (NodeId v : positive) cost += tree.node(v).children.size();
  return cost;
}

void apply_example(PLTModel& model, const SparseVector& x, std::span<const LabelId> labels,
                   const TrainConfig& cfg, double weight) {
  const NodeAssignment a = assign_to_nodes(model.tree, labels);
  for (NodeId v : a.positives) model.models[v].update(x, 1, cfg, weight);
  for (NodeId v : a.negatives) model.models[v].update(x, 0, cfg, weight);
}

std::vector<std::size_t> epoch_order(std::size_t n, const TrainConfig& cfg, int epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (cfg.shuffle) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

namespace {

void check_coverage(const LabelTree& tree, const Dataset& data) {
  for (const auto& ex : data.examples)
    for (LabelId l : ex.labels)
      if (!tree.has_label(l)) throw RangeError("label " + std::to_string(l) + " has no leaf in the tree");
}

}  // namespace

PLTModel train(const LabelTree& tree, const Dataset& data, const TrainConfig& cfg, LossKind loss) {
  check_coverage(tree, data);
  PLTModel model = PLTModel::fresh(tree, loss);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch)
    for (std::size_t i : epoch_order(data.size(), cfg, epoch))
      apply_example(model, data.examples[i].features, data.examples[i].labels, cfg);
  return model;
}

PLTModel train_per_node(const LabelTree& tree, const Dataset& data, const TrainConfig& cfg,
                        LossKind loss, unsigned threads) {
  check_coverage(tree, data);
  struct Item {
    std::uint32_t example;
    std::uint8_t target;
  };
  std::vector<std::vector<Item>> per_node(tree.size());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i : epoch_order(data.size(), cfg, epoch)) {
      const NodeAssignment a = assign_to_nodes(tree, data.examples[i].labels);
      for (NodeId v : a.positives) per_node[v].push_back({static_cast<std::uint32_t>(i), 1});
      for (NodeId v : a.negatives) per_node[v].push_back({static_cast<std::uint32_t>(i), 0});
    }
  }

  PLTModel model = PLTModel::fresh(tree, loss);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t v; (v = next.fetch_add(1)) < per_node.size();)
        for (const Item& it : per_node[v])
          model.models[v].update(data.examples[it.example].features, it.target, cfg);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = per_node.size();
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return model;
}

PLTModel train_online_stream(const LabelTree& tree, std::span<const Example> stream,
                             const TrainConfig& cfg, LossKind loss) {
  PLTModel model = PLTModel::fresh(tree, loss);
  for (const Example& ex : stream) apply_example(model, ex.features, ex.labels, cfg);
  return model;
}

void prune_model(PLTModel& model, double threshold) {
  for (auto& m : model.models) m.prune(threshold);
}

}  // namespace plt
