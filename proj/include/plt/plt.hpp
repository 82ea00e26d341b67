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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "plt/label_tree.hpp"
#include "plt/node_model.hpp"
#include "plt/sparse.hpp"

namespace plt {

/// Positive and negative nodes of one example. Both lists are sorted.
struct NodeAssignment {
  std::vector<NodeId> positives;
  std::vector<NodeId> negatives;

  friend bool operator==(const NodeAssignment&, const NodeAssignment&) = default;
};

/// A label tree with one node estimator per node.
struct PLTModel {
  LabelTree tree;
  std::vector<NodeModel> models;  // indexed by node id
  LossKind loss = LossKind::logistic;
  bool normalize_siblings = false;

  /// Untrained models for every node of `tree`.
  static PLTModel fresh(LabelTree tree, LossKind loss);

  std::size_t num_labels() const noexcept { return tree.num_labels(); }
  /// Sum of per-node update counters.
  std::uint64_t total_updates() const noexcept;
};

/// Positives: every node on the root path of a positive leaf. Negatives: the
/// children of positives that are not positive themselves, or the root when
/// the label set is empty. Throws RangeError for a label without a leaf.
NodeAssignment assign_to_nodes(const LabelTree& tree, std::span<const LabelId> labels);

/// Number of node updates an example costs: 1 + the number of non-root
/// nodes whose parent is positive.
std::size_t training_cost(const LabelTree& tree, std::span<const LabelId> labels);

/// The incremental step shared by every trainer: positive updates in
/// ascending node order, then negative updates in ascending node order.
void apply_example(PLTModel& model, const SparseVector& x, std::span<const LabelId> labels,
                   const TrainConfig& cfg, double weight = 1.0);

/// Multi-epoch incremental training in dataset order (or a seeded
/// permutation per epoch when cfg.shuffle is set).
PLTModel train(const LabelTree& tree, const Dataset& data, const TrainConfig& cfg, LossKind loss);

/// Same result as train(), computed node by node: every node first collects
/// its own (example, target) sequence and is then trained on it alone. Nodes
/// are independent, so `threads` > 1 trains them concurrently.
PLTModel train_per_node(const LabelTree& tree, const Dataset& data, const TrainConfig& cfg,
                        LossKind loss, unsigned threads = 1);

/// Single pass over a stream on a fixed tree.
PLTModel train_online_stream(const LabelTree& tree, std::span<const Example> stream,
                             const TrainConfig& cfg, LossKind loss);

/// Per-epoch example order used by train().
std::vector<std::size_t> epoch_order(std::size_t n, const TrainConfig& cfg, int epoch);

/// Applies cfg.prune_threshold to every node.
void prune_model(PLTModel& model, double threshold);

}  // namespace plt
