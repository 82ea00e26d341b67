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

#include <cstddef>
#include <span>
#include <vector>

#include "plt/plt.hpp"

namespace plt {

struct ScoredLabel {
  LabelId label;
  double score;

  friend bool operator==(const ScoredLabel&, const ScoredLabel&) = default;
};

/// Labels with scores, sorted by descending score then ascending label id.
using TopKResult = std::vector<ScoredLabel>;

/// Per-label thresholds in [0,1] and the derived per-node thresholds
/// (minimum over the labels below a node) for one tree.
class NodeThresholds {
 public:
  NodeThresholds(const LabelTree& tree, std::vector<double> per_label);
  static NodeThresholds uniform(const LabelTree& tree, double tau);

  double label(LabelId j) const { return per_label_.at(j); }
  double node(NodeId v) const { return per_node_[v]; }
  std::span<const double> per_label() const noexcept { return per_label_; }

 private:
  std::vector<double> per_label_;
  std::vector<double> per_node_;
};

/// Divides by the sum when the sum is below 1; otherwise (or for an all-zero
/// list) returns the input unchanged.
std::vector<double> normalize_children(std::span<const double> estimates);

/// Estimates of every child of v in child order, normalized when the model
/// asks for it.
std::vector<double> child_estimates(const PLTModel& model, const SparseVector& x, NodeId v);

/// Product of node estimates along the root path of label j.
double estimate_label_prob(const PLTModel& model, const SparseVector& x, LabelId j);

struct ThresholdPrediction {
  std::vector<LabelId> labels;  // ascending
  std::vector<double> scores;   // estimate of each predicted label
  std::size_t node_calls = 0;   // classifier evaluations
};

/// Every label j with estimate >= tau_j, by depth-first search that only
/// enters nodes whose running product reaches the node threshold.
ThresholdPrediction predict_with_thresholds(const PLTModel& model, const SparseVector& x,
                                            const NodeThresholds& tau);

/// Exact top-k by best-first (uniform-cost) search. Throws if k is 0 or
/// exceeds the number of labels.
TopKResult predict_top_k(const PLTModel& model, const SparseVector& x, std::size_t k);

/// Level-synchronous beam search keeping `beam_width` nodes per level.
/// Approximate; exact once the beam is at least as wide as every level.
TopKResult predict_beam(const PLTModel& model, const SparseVector& x, std::size_t k,
                        std::size_t beam_width = 10);

/// Indices of the k largest marginals, ties by ascending index.
std::vector<LabelId> bayes_top_k(std::span<const double> marginals, std::size_t k);

}  // namespace plt
