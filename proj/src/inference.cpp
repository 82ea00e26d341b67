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

#include "plt/inference.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "plt/errors.hpp"

namespace plt {

namespace {

// Orders by descending score, ties by ascending id.
struct ScoredNode {
  double score;
  NodeId node;
};

struct LowerPriority {
  bool operator()(const ScoredNode& a, const ScoredNode& b) const {
    if (a.score != b.score) return a.score < b.score;
    return a.node > b.node;
  }
};

void sort_result(TopKResult& r) {
  std::sort(r.begin(), r.end(), [](const ScoredLabel& a, const ScoredLabel& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.label < b.label;
  });
}

}  // namespace

NodeThresholds::NodeThresholds(const LabelTree& tree, std::vector<double> per_label)
    : per_label_(std::move(per_label)), per_node_(tree.size(), 1.0) {
  for (double t : per_label_)
    if (!(t >= 0.0 && t <= 1.0)) throw RangeError("threshold outside [0,1]");
  if (per_label_.size() < tree.label_bound())
    throw RangeError("threshold vector shorter than the label space");
  // Children have larger ids than parents in every tree built here, but do
  // not rely on it: propagate along each leaf's root path.
  for (NodeId v = 0; v < tree.size(); ++v) {
    const TreeNode& n = tree.node(v);
    if (!n.has_label()) continue;
    const double t = per_label_[n.label];
    for (NodeId u = v; u != kNoNode; u = tree.node(u).parent) {
      if (per_node_[u] <= t) break;
      per_node_[u] = t;
    }
  }
}

NodeThresholds NodeThresholds::uniform(const LabelTree& tree, double tau) {
  return NodeThresholds(tree, std::vector<double>(tree.label_bound(), tau));
}

std::vector<double> normalize_children(std::span<const double> estimates) {
  std::vector<double> out(estimates.begin(), estimates.end());
  const double sum = std::accumulate(out.begin(), out.end(), 0.0);
  if (sum < 1.0 && sum > 0.0)
    for (double& e : out) e /= sum;
  return out;
}

std::vector<double> child_estimates(const PLTModel& model, const SparseVector& x, NodeId v) {
  const auto& children = model.tree.node(v).children;
  std::vector<double> est;
  est.reserve(children.size());
  for (NodeId c : children) est.push_back(model.models[c].predict_prob(x));
  if (model.normalize_siblings) return normalize_children(est);
  return est;
}

double estimate_label_prob(const PLTModel& model, const SparseVector& x, LabelId j) {
  const auto path = path_to_root(model.tree, model.tree.leaf(j));
  double p = model.models[path.back()].predict_prob(x);
  for (std::size_t i = path.size() - 1; i-- > 0;) {
    const NodeId v = path[i];
    if (model.normalize_siblings) {
      const NodeId parent = path[i + 1];
      const auto& siblings = model.tree.node(parent).children;
      const auto est = child_estimates(model, x, parent);
      const auto pos = std::find(siblings.begin(), siblings.end(), v) - siblings.begin();
      p *= est[pos];
    } else {
      p *= model.models[v].predict_prob(x);
    }
  }
  return p;
}

ThresholdPrediction predict_with_thresholds(const PLTModel& model, const SparseVector& x,
                                            const NodeThresholds& tau) {
  ThresholdPrediction out;
  TopKResult found;
  const LabelTree& tree = model.tree;
  std::vector<ScoredNode> stack;
  stack.push_back({model.models[tree.root()].predict_prob(x), tree.root()});
  out.node_calls = 1;
  while (!stack.empty()) {
    const ScoredNode cur = stack.back();
    stack.pop_back();
    if (cur.score < tau.node(cur.node)) continue;
    const TreeNode& n = tree.node(cur.node);
    if (n.is_leaf()) {
      if (n.has_label()) found.push_back({n.label, cur.score});
      continue;
    }
    const auto est = child_estimates(model, x, cur.node);
    out.node_calls += est.size();
    for (std::size_t i = 0; i < est.size(); ++i)
      stack.push_back({cur.score * est[i], n.children[i]});
  }
  std::sort(found.begin(), found.end(),
            [](const ScoredLabel& a, const ScoredLabel& b) { return a.label < b.label; });
  for (const auto& f : found) {
    out.labels.push_back(f.label);
    out.scores.push_back(f.score);
  }
  return out;
}

TopKResult predict_top_k(const PLTModel& model, const SparseVector& x, std::size_t k) {
  const LabelTree& tree = model.tree;
  if (k == 0 || k > tree.num_labels())
    throw RangeError("top-k: k=" + std::to_string(k) + " outside [1, " +
                     std::to_string(tree.num_labels()) + "]");
  std::priority_queue<ScoredNode, std::vector<ScoredNode>, LowerPriority> queue;
  queue.push({model.models[tree.root()].predict_prob(x), tree.root()});

  TopKResult found;
  // After k leaves, keep draining nodes tied with the k-th score so that the
  // label-id tie-break is applied over every tied leaf.
  while (!queue.empty()) {
    if (found.size() >= k && queue.top().score < found[k - 1].score) break;
    const ScoredNode cur = queue.top();
    queue.pop();
    const TreeNode& n = tree.node(cur.node);
    if (n.is_leaf()) {
      if (n.has_label()) found.push_back({n.label, cur.score});
      continue;
    }
    const auto est = child_estimates(model, x, cur.node);
    for (std::size_t i = 0; i < est.size(); ++i) queue.push({cur.score * est[i], n.children[i]});
  }
  sort_result(found);
  if (found.size() > k) found.resize(k);
  return found;
}

TopKResult predict_beam(const PLTModel& model, const SparseVector& x, std::size_t k,
                        std::size_t beam_width) {
  const LabelTree& tree = model.tree;
  if (k == 0 || k > tree.num_labels())
    throw RangeError("beam: k=" + std::to_string(k) + " outside [1, " +
                     std::to_string(tree.num_labels()) + "]");
  if (beam_width < k) throw RangeError("beam width must be at least k");

  TopKResult pool;
  std::vector<ScoredNode> frontier{{model.models[tree.root()].predict_prob(x), tree.root()}};
  if (tree.is_leaf(tree.root())) {
    if (tree.node(tree.root()).has_label()) pool.push_back({tree.node(tree.root()).label, frontier[0].score});
    frontier.clear();
  }
  std::vector<ScoredNode> level;
  while (!frontier.empty()) {
    level.clear();
    for (const ScoredNode& cur : frontier) {
      const auto& children = tree.node(cur.node).children;
      const auto est = child_estimates(model, x, cur.node);
      for (std::size_t i = 0; i < est.size(); ++i) level.push_back({cur.score * est[i], children[i]});
    }
    const std::size_t keep = std::min(beam_width, level.size());
    std::partial_sort(level.begin(), level.begin() + static_cast<std::ptrdiff_t>(keep), level.end(),
                      [](const ScoredNode& a, const ScoredNode& b) { return LowerPriority{}(b, a); });
    frontier.clear();
    for (std::size_t i = 0; i < keep; ++i) {
      const TreeNode& n = tree.node(level[i].node);
      if (n.is_leaf()) {
        if (n.has_label()) pool.push_back({n.label, level[i].score});
      } else {
        frontier.push_back(level[i]);
      }
    }
  }
  sort_result(pool);
  if (pool.size() > k) pool.resize(k);
  return pool;
}

std::vector<LabelId> bayes_top_k(std::span<const double> marginals, std::size_t k) {
  std::vector<LabelId> idx(marginals.size());
  std::iota(idx.begin(), idx.end(), LabelId{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](LabelId a, LabelId b) { return marginals[a] > marginals[b]; });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

}  // namespace plt
