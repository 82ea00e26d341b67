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
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plt/sparse.hpp"

namespace plt {

using NodeId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr LabelId kNoLabel = std::numeric_limits<LabelId>::max();

struct TreeNode {
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  LabelId label = kNoLabel;

  bool has_label() const noexcept { return label != kNoLabel; }
  bool is_leaf() const noexcept { return children.empty(); }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Rooted tree whose leaves carry labels. Node ids are dense and assigned in
/// creation order; children lists keep insertion order.
class LabelTree {
 public:
  /// A tree consisting of a single unlabeled root.
  LabelTree();

  /// Wraps an arbitrary node array without checking it; see validate_tree.
  static LabelTree from_nodes(std::vector<TreeNode> nodes, NodeId root);

  NodeId root() const noexcept { return root_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const TreeNode> nodes() const noexcept { return nodes_; }

  const TreeNode& node(NodeId v) const;
  bool contains(NodeId v) const noexcept { return v < nodes_.size(); }
  bool is_leaf(NodeId v) const { return node(v).is_leaf(); }

  /// Leaf of label l, or kNoNode.
  NodeId find_leaf(LabelId l) const noexcept {
    return l < label_to_node_.size() ? label_to_node_[l] : kNoNode;
  }
  /// Leaf of label l; throws RangeError if l has none.
  NodeId leaf(LabelId l) const;
  bool has_label(LabelId l) const noexcept { return find_leaf(l) != kNoNode; }

  std::size_t num_labels() const noexcept { return num_labels_; }
  /// One past the largest label id present (0 if no labels).
  std::size_t label_bound() const noexcept;

  NodeId add_child(NodeId parent);
  void assign_label(NodeId v, LabelId l);
  void clear_label(NodeId v);
  /// Creates a node as the only child of v. It takes over v's children, or
  /// v's label when v is a leaf.
  NodeId insert_below(NodeId v);

  friend bool operator==(const LabelTree& a, const LabelTree& b) {
    return a.root_ == b.root_ && a.nodes_ == b.nodes_;
  }

 private:
  std::vector<TreeNode> nodes_;
  std::vector<NodeId> label_to_node_;
  std::size_t num_labels_ = 0;
  NodeId root_ = 0;
};

/// Node ids from v up to the root, inclusive.
std::vector<NodeId> path_to_root(const LabelTree& tree, NodeId v);

struct TreeStats {
  std::size_t depth = 0;       // edges on the longest root-to-leaf path
  std::size_t max_degree = 0;  // largest number of children
  std::size_t num_leaves = 0;

  friend bool operator==(const TreeStats&, const TreeStats&) = default;
};

TreeStats tree_stats(const LabelTree& tree);

struct TreeValidation {
  bool ok = true;
  std::string message;
  std::vector<NodeId> nodes;

  explicit operator bool() const noexcept { return ok; }
};

/// Checks the structural invariants. With `num_labels` set, additionally
/// requires a finalized tree: every leaf labeled and each of the labels
/// 0..num_labels-1 on exactly one leaf.
TreeValidation validate_tree(const LabelTree& tree,
                             std::optional<std::size_t> num_labels = std::nullopt);

/// One line per node, "node_id parent_id|-1 label_id|-1", root first.
void write_tree(const LabelTree& tree, std::ostream& out);
LabelTree read_tree(std::istream& in);

}  // namespace plt
