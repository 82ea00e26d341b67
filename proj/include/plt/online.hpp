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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "plt/plt.hpp"

namespace plt {

class OnlineState;

/// Where and how to extend the tree for a new label.
///  - insert == false: `node` is internal; the new leaf becomes its child.
///  - insert == true, `node` internal: a new node adopts all children of
///    `node`, then the new leaf is added next to it.
///  - insert == true, `node` a leaf: its label moves to a new child, then the
///    new leaf is added next to it.
struct PolicyDecision {
  NodeId node = 0;
  bool insert = false;

  friend bool operator==(const PolicyDecision&, const PolicyDecision&) = default;
};

class BuildingPolicy {
 public:
  virtual ~BuildingPolicy() = default;

  virtual PolicyDecision decide(const OnlineState& state, const SparseVector& x, LabelId label,
                                std::span<const LabelId> labels) = 0;

  /// Whether node v may still receive new children or an inserted child.
  /// Checked for the nodes involved in each extension; auxiliary models of
  /// nodes for which it returns false are dropped.
  virtual bool keeps_auxiliary(const OnlineState&, NodeId) const { return true; }
};

/// Grows a complete `arity`-ary tree: the parent of the next node in the
/// creation-order array is slot ceil(s / arity) - 1.
class CompleteTreePolicy final : public BuildingPolicy {
 public:
  explicit CompleteTreePolicy(std::size_t arity = 2);

  PolicyDecision decide(const OnlineState& state, const SparseVector& x, LabelId label,
                        std::span<const LabelId> labels) override;

  std::size_t arity() const noexcept { return arity_; }

 private:
  std::size_t arity_;
};

struct OnlineCounters {
  std::uint64_t regular_updates = 0;
  std::uint64_t auxiliary_updates = 0;

  std::uint64_t total() const noexcept { return regular_updates + auxiliary_updates; }
};

/// Online PLT: tree and node models grown together over a stream. After every
/// example, the regular models equal those of incremental training on the
/// current tree over the stream seen so far.
class OnlineState {
 public:
  OnlineState(std::unique_ptr<BuildingPolicy> policy, TrainConfig cfg, LossKind loss);

  /// Extends the tree with the example's unseen labels (ascending), then
  /// updates the models.
  void process(const Example& example);

  /// Adds a new label j under a policy decision.
  void update_tree(const SparseVector& x, LabelId j, std::span<const LabelId> labels);

  /// Inserts a child v' under v that takes over v's label or children.
  NodeId insert_node(NodeId v);

  /// Adds a leaf for label j under v.
  NodeId add_leaf(LabelId j, NodeId v);

  void update_classifiers(const SparseVector& x, std::span<const LabelId> labels);

  /// Tree and regular models; auxiliary models are not part of it.
  PLTModel snapshot() const;

  const LabelTree& tree() const noexcept { return tree_; }
  const NodeModel& regular(NodeId v) const { return regular_.at(v); }
  /// nullptr when v has no auxiliary model.
  const NodeModel* auxiliary(NodeId v) const;
  const OnlineCounters& counters() const noexcept { return counters_; }
  std::uint64_t examples_seen() const noexcept { return t_; }
  const TrainConfig& config() const noexcept { return cfg_; }
  LossKind loss() const noexcept { return loss_; }

 private:
  void drop_closed_auxiliaries(std::span<const NodeId> nodes);

  LabelTree tree_;
  std::vector<NodeModel> regular_;
  std::vector<std::optional<NodeModel>> auxiliary_;
  std::unique_ptr<BuildingPolicy> policy_;
  TrainConfig cfg_;
  LossKind loss_;
  OnlineCounters counters_;
  std::uint64_t t_ = 0;
};

/// Convenience: an OnlineState with the complete-tree policy.
OnlineState make_complete_tree_oplt(std::size_t arity, const TrainConfig& cfg, LossKind loss);

}  // namespace plt
