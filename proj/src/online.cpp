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

#include "plt/online.hpp"

#include <algorithm>

#include "plt/errors.hpp"

namespace plt {

CompleteTreePolicy::CompleteTreePolicy(std::size_t arity) : arity_(arity) {
  if (arity_ < 2) throw Error("complete-tree policy: arity must be at least 2");
}

PolicyDecision CompleteTreePolicy::decide(const OnlineState& state, const SparseVector&, LabelId,
                                          std::span<const LabelId>) {
  // Node ids are creation order, so the tree's node array is the array of
  // the complete tree.
  const std::size_t s = state.tree().size();
  const auto parent = static_cast<NodeId>((s + arity_ - 1) / arity_ - 1);
  return {parent, state.tree().is_leaf(parent)};
}

OnlineState::OnlineState(std::unique_ptr<BuildingPolicy> policy, TrainConfig cfg, LossKind loss)
    : regular_{NodeModel(loss)},
      auxiliary_{NodeModel(loss)},
      policy_(std::move(policy)),
      cfg_(cfg),
      loss_(loss) {
  if (!policy_) throw Error("online PLT needs a building policy");
}

const NodeModel* OnlineState::auxiliary(NodeId v) const {
  const auto& a = auxiliary_.at(v);
  return a ? &*a : nullptr;
}

void OnlineState::process(const Example& example) {
  for (LabelId j : example.labels)  // labels are sorted
    if (!tree_.has_label(j)) update_tree(example.features, j, example.labels);
  update_classifiers(example.features, example.labels);
  ++t_;
}

void OnlineState::update_tree(const SparseVector& x, LabelId j, std::span<const LabelId> labels) {
  if (tree_.has_label(j)) throw TreeError("label " + std::to_string(j) + " already in the tree");
  if (tree_.num_labels() == 0) {
    tree_.assign_label(tree_.root(), j);
    return;
  }
  const PolicyDecision d = policy_->decide(*this, x, j, labels);
  if (!tree_.contains(d.node)) throw TreeError("policy selected a missing node");
  if (!d.insert && tree_.is_leaf(d.node))
    throw TreeError("policy asked to add a child to leaf " + std::to_string(d.node) + " without insert");
  std::vector<NodeId> touched{d.node};
  if (d.insert) touched.push_back(insert_node(d.node));
  touched.push_back(add_leaf(j, d.node));
  drop_closed_auxiliaries(touched);
}

NodeId OnlineState::insert_node(NodeId v) {
  const NodeModel* aux = auxiliary(v);
  if (!aux) throw TreeError("insert_node: node " + std::to_string(v) + " has no auxiliary model");
  NodeModel copy = *aux;

  const NodeId fresh = tree_.insert_below(v);
  regular_.push_back(copy);
  auxiliary_.push_back(std::move(copy));
  return fresh;
}

NodeId OnlineState::add_leaf(LabelId j, NodeId v) {
  const NodeModel* aux = auxiliary(v);
  if (!aux) throw TreeError("add_leaf: node " + std::to_string(v) + " has no auxiliary model");
  NodeModel inverse = aux->inverse_view();
  const NodeId leaf = tree_.add_child(v);
  tree_.assign_label(leaf, j);
  regular_.push_back(std::move(inverse));
  auxiliary_.emplace_back(NodeModel(loss_));
  return leaf;
}

void OnlineState::update_classifiers(const SparseVector& x, std::span<const LabelId> labels) {
  const NodeAssignment a = assign_to_nodes(tree_, labels);
  for (NodeId v : a.positives) {
    regular_[v].update(x, 1, cfg_);
    ++counters_.regular_updates;
    if (auxiliary_[v]) {
      auxiliary_[v]->update(x, 1, cfg_);
      ++counters_.auxiliary_updates;
    }
  }
  for (NodeId v : a.negatives) {
    regular_[v].update(x, 0, cfg_);
    ++counters_.regular_updates;
  }
}

PLTModel OnlineState::snapshot() const {
  PLTModel m;
  m.tree = tree_;
  m.models = regular_;
  m.loss = loss_;
  return m;
}

void OnlineState::drop_closed_auxiliaries(std::span<const NodeId> nodes) {
  for (NodeId v : nodes)
    if (auxiliary_[v] && !policy_->keeps_auxiliary(*this, v)) auxiliary_[v].reset();
}

OnlineState make_complete_tree_oplt(std::size_t arity, const TrainConfig& cfg, LossKind loss) {
  return OnlineState(std::make_unique<CompleteTreePolicy>(arity), cfg, loss);
}

}  // namespace plt
