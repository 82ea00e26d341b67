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

#include "plt/label_tree.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "plt/errors.hpp"

namespace plt {

LabelTree::LabelTree() : nodes_(1) {}

LabelTree LabelTree::from_nodes(std::vector<TreeNode> nodes, NodeId root) {
  LabelTree t;
  t.nodes_ = std::move(nodes);
  t.root_ = root;
  for (NodeId v = 0; v < t.nodes_.size(); ++v) {
    const LabelId l = t.nodes_[v].label;
    if (l == kNoLabel) continue;
    if (l >= t.label_to_node_.size()) t.label_to_node_.resize(l + 1, kNoNode);
    if (t.label_to_node_[l] == kNoNode) {
      t.label_to_node_[l] = v;
      ++t.num_labels_;
    }
  }
  return t;
}

const TreeNode& LabelTree::node(NodeId v) const {
  if (v >= nodes_.size())
    throw RangeError("node id " + std::to_string(v) + " out of range (tree has " +
                     std::to_string(nodes_.size()) + " nodes)");
  return nodes_[v];
}

NodeId LabelTree::leaf(LabelId l) const {
  NodeId v = find_leaf(l);
  if (v == kNoNode) throw RangeError("label " + std::to_string(l) + " has no leaf in the tree");
  return v;
}

std::size_t LabelTree::label_bound() const noexcept {
  std::size_t b = label_to_node_.size();
  while (b > 0 && label_to_node_[b - 1] == kNoNode) --b;
  return b;
}

NodeId LabelTree::add_child(NodeId parent) {
  if (parent >= nodes_.size()) throw RangeError("add_child: no node " + std::to_string(parent));
  if (nodes_[parent].has_label())
    throw TreeError("add_child: node " + std::to_string(parent) + " carries a label");
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(TreeNode{parent, {}, kNoLabel});
  nodes_[parent].children.push_back(id);
  return id;
}

void LabelTree::assign_label(NodeId v, LabelId l) {
  const TreeNode& n = node(v);
  if (!n.is_leaf()) throw TreeError("assign_label: node " + std::to_string(v) + " has children");
  if (n.has_label()) throw TreeError("assign_label: node " + std::to_string(v) + " already labeled");
  if (l == kNoLabel) throw RangeError("assign_label: reserved label id");
  if (has_label(l)) throw TreeError("assign_label: label " + std::to_string(l) + " already placed");
  if (l >= label_to_node_.size()) label_to_node_.resize(l + 1, kNoNode);
  label_to_node_[l] = v;
  nodes_[v].label = l;
  ++num_labels_;
}

void LabelTree::clear_label(NodeId v) {
  const LabelId l = node(v).label;
  if (l == kNoLabel) return;
  label_to_node_[l] = kNoNode;
  nodes_[v].label = kNoLabel;
  --num_labels_;
}

NodeId LabelTree::insert_below(NodeId v) {
  node(v);
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(TreeNode{v, {}, kNoLabel});
  if (nodes_[v].is_leaf()) {
    const LabelId l = nodes_[v].label;
    if (l != kNoLabel) {
      nodes_[id].label = l;
      nodes_[v].label = kNoLabel;
      label_to_node_[l] = id;
    }
  } else {
    nodes_[id].children = std::move(nodes_[v].children);
    for (NodeId c : nodes_[id].children) nodes_[c].parent = id;
  }
  nodes_[v].children.assign(1, id);
  return id;
}

std::vector<NodeId> path_to_root(const LabelTree& tree, NodeId v) {
  tree.node(v);
  std::vector<NodeId> path;
  while (v != kNoNode) {
    path.push_back(v);
    if (path.size() > tree.size()) throw TreeError("path_to_root: cycle detected");
    v = tree.node(v).parent;
  }
  return path;
}

TreeStats tree_stats(const LabelTree& tree) {
  TreeStats s;
  // Iterative DFS carrying depth.
  std::vector<std::pair<NodeId, std::size_t>> stack{{tree.root(), 0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    const TreeNode& n = tree.node(v);
    s.max_degree = std::max(s.max_degree, n.children.size());
    if (n.is_leaf()) {
      ++s.num_leaves;
      s.depth = std::max(s.depth, d);
    }
    for (NodeId c : n.children) stack.emplace_back(c, d + 1);
  }
  return s;
}

namespace {

TreeValidation violation(std::string message, std::vector<NodeId> nodes) {
  return TreeValidation{false, std::move(message), std::move(nodes)};
}

}  // namespace

TreeValidation validate_tree(const LabelTree& tree, std::optional<std::size_t> num_labels) {
  const auto nodes = tree.nodes();
  const std::size_t n = nodes.size();
  if (n == 0) return violation("empty tree", {});
  if (tree.root() >= n) return violation("root id out of range", {tree.root()});

  std::vector<NodeId> listed_by(n, kNoNode);
  for (NodeId v = 0; v < n; ++v) {
    if (v != tree.root() && nodes[v].parent == kNoNode) return violation("second root", {tree.root(), v});
    for (NodeId c : nodes[v].children) {
      if (c >= n) return violation("child id out of range", {v, c});
      if (c == tree.root()) return violation("root listed as a child", {v, c});
      if (listed_by[c] != kNoNode) return violation("not a tree", {listed_by[c], v, c});
      listed_by[c] = v;
    }
  }
  if (nodes[tree.root()].parent != kNoNode) return violation("root has a parent", {tree.root()});
  for (NodeId v = 0; v < n; ++v) {
    if (v == tree.root()) continue;
    if (nodes[v].parent >= n) return violation("parent id out of range", {v});
    if (listed_by[v] != nodes[v].parent)
      return violation("parent/children mismatch", {v, nodes[v].parent});
  }

  // Reachability; with consistent parent links this also rules out cycles.
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{tree.root()};
  std::size_t reached = 0;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (seen[v]) return violation("cycle", {v});
    seen[v] = 1;
    ++reached;
    for (NodeId c : nodes[v].children) stack.push_back(c);
  }
  if (reached != n) {
    for (NodeId v = 0; v < n; ++v)
      if (!seen[v]) return violation("unreachable node", {v});
  }

  std::vector<NodeId> owner;
  for (NodeId v = 0; v < n; ++v) {
    const LabelId l = nodes[v].label;
    if (l == kNoLabel) continue;
    if (!nodes[v].is_leaf()) return violation("label on an internal node", {v});
    if (l >= owner.size()) owner.resize(l + 1, kNoNode);
    if (owner[l] != kNoNode) return violation("duplicate label", {owner[l], v});
    owner[l] = v;
    if (tree.find_leaf(l) != v) return violation("label index inconsistent", {v});
  }

  if (num_labels) {
    for (NodeId v = 0; v < n; ++v) {
      if (nodes[v].is_leaf() && !nodes[v].has_label()) return violation("unlabeled leaf", {v});
      if (nodes[v].has_label() && nodes[v].label >= *num_labels)
        return violation("label out of range", {v});
    }
    for (LabelId l = 0; l < *num_labels; ++l)
      if (l >= owner.size() || owner[l] == kNoNode)
        return violation("label " + std::to_string(l) + " has no leaf", {});
  }
  return {};
}

void write_tree(const LabelTree& tree, std::ostream& out) {
  auto line = [&](NodeId v) {
    const TreeNode& n = tree.node(v);
    out << v << ' ' << (n.parent == kNoNode ? std::string("-1") : std::to_string(n.parent)) << ' '
        << (n.has_label() ? std::to_string(n.label) : std::string("-1")) << '\n';
  };
  line(tree.root());
  for (NodeId v = 0; v < tree.size(); ++v)
    if (v != tree.root()) line(v);
}

LabelTree read_tree(std::istream& in) {
  struct Row {
    long long id, parent, label;
  };
  std::vector<Row> rows;
  std::string buf;
  std::size_t line = 0;
  while (std::getline(in, buf)) {
    ++line;
    if (buf.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(buf);
    Row r{};
    std::string extra;
    if (!(ls >> r.id >> r.parent >> r.label) || (ls >> extra))
      throw ParseError(line, "expected 'node_id parent_id label_id'");
    if (r.id < 0 || r.parent < -1 || r.label < -1) throw ParseError(line, "negative id");
    if (rows.empty() && r.parent != -1) throw ParseError(line, "first line must be the root");
    if (!rows.empty() && r.parent == -1) throw ParseError(line, "second root");
    rows.push_back(r);
  }
  if (rows.empty()) throw ParseError(line, "empty tree file");

  const std::size_t n = rows.size();
  std::vector<TreeNode> nodes(n);
  std::vector<char> present(n, 0);
  for (const Row& r : rows) {
    if (static_cast<std::size_t>(r.id) >= n || present[r.id])
      throw TreeError("tree file node ids must be dense and unique");
    if (r.parent >= static_cast<long long>(n)) throw TreeError("tree file parent id out of range");
    present[r.id] = 1;
    nodes[r.id].parent = r.parent < 0 ? kNoNode : static_cast<NodeId>(r.parent);
    nodes[r.id].label = r.label < 0 ? kNoLabel : static_cast<LabelId>(r.label);
  }
  for (NodeId v = 0; v < n; ++v)
    if (nodes[v].parent != kNoNode) nodes[nodes[v].parent].children.push_back(v);

  LabelTree tree = LabelTree::from_nodes(std::move(nodes), static_cast<NodeId>(rows.front().id));
  if (auto check = validate_tree(tree); !check) throw TreeError("invalid tree file: " + check.message);
  return tree;
}

}  // namespace plt
