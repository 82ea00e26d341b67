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

#include "plt/tree_build.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "plt/errors.hpp"
#include "plt/random.hpp"

namespace plt {

namespace {

// Leaves of an array-shaped k-ary tree with s nodes: slots whose first child
// slot k*i+1 falls outside the array.
std::size_t array_leaves(std::size_t s, std::size_t k) { return s - (s - 1 + k - 1) / k; }

}  // namespace

LabelTree build_complete_tree(std::size_t m, const TreeConfig& cfg,
                              std::span<const LabelId> label_order) {
  if (m == 0) throw Error("build_complete_tree: no labels");
  if (cfg.arity < 2) throw Error("build_complete_tree: arity must be at least 2");
  if (label_order.size() != m) throw Error("build_complete_tree: label order has wrong length");
  {
    std::vector<LabelId> sorted(label_order.begin(), label_order.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("build_complete_tree: label order repeats a label");
  }
  const std::size_t k = cfg.arity;
  std::size_t s = 1;
  while (array_leaves(s, k) < m) ++s;

  LabelTree tree;
  for (std::size_t i = 1; i < s; ++i) tree.add_child(static_cast<NodeId>((i - 1) / k));

  std::size_t next = 0;
  std::vector<NodeId> stack{tree.root()};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    const auto& ch = tree.node(v).children;
    if (ch.empty()) {
      tree.assign_label(v, label_order[next++]);
      continue;
    }
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return tree;
}

LabelTree build_complete_tree(std::size_t m, const TreeConfig& cfg) {
  std::vector<LabelId> order(m);
  std::iota(order.begin(), order.end(), LabelId{0});
  return build_complete_tree(m, cfg, order);
}

std::vector<LabelId> frequency_order(const Dataset& data) {
  const auto freq = label_frequencies(data);
  std::vector<LabelId> order(data.num_labels);
  std::iota(order.begin(), order.end(), LabelId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](LabelId a, LabelId b) { return freq[a] > freq[b]; });
  return order;
}

std::vector<SparseVector> label_profiles(const Dataset& data) {
  std::vector<std::vector<std::uint32_t>> positives(data.num_labels);
  for (std::uint32_t i = 0; i < data.examples.size(); ++i)
    for (LabelId l : data.examples[i].labels) positives[l].push_back(i);

  std::vector<SparseVector> profiles(data.num_labels);
  std::vector<double> acc(data.num_features, 0.0);
  std::vector<FeatureId> touched;
  for (LabelId l = 0; l < data.num_labels; ++l) {
    if (positives[l].empty()) continue;
    for (std::uint32_t i : positives[l]) {
      for (const auto& e : data.examples[i].features) {
        if (acc[e.id] == 0.0) touched.push_back(e.id);
        acc[e.id] += e.value;
      }
    }
    const double n = static_cast<double>(positives[l].size());
    std::vector<FeatureValue> entries;
    entries.reserve(touched.size());
    for (FeatureId f : touched) {
      if (acc[f] != 0.0) entries.push_back({f, acc[f] / n});
      acc[f] = 0.0;
    }
    touched.clear();
    profiles[l] = SparseVector::from_entries(std::move(entries));
    profiles[l].normalize();
  }
  return profiles;
}

std::vector<std::vector<std::uint32_t>> balanced_kmeans(std::span<const SparseVector> profiles,
                                                        std::span<const std::uint32_t> items,
                                                        std::size_t k, double epsilon,
                                                        int max_iters, std::uint64_t seed,
                                                        std::size_t num_features) {
  const std::size_t n = items.size();
  if (n == 0) return {};
  const std::size_t kk = std::min(k, n);
  std::vector<std::vector<std::uint32_t>> clusters(kk);
  std::vector<std::size_t> capacity(kk);
  for (std::size_t c = 0; c < kk; ++c) capacity[c] = n / kk + (c < n % kk ? 1 : 0);

  // Zero profiles have no direction: deal them out round-robin first.
  std::vector<std::uint32_t> active;
  std::size_t dealt = 0;
  for (std::uint32_t item : items) {
    if (profiles[item].empty()) {
      const std::size_t c = dealt++ % kk;
      clusters[c].push_back(item);
      --capacity[c];
    } else {
      active.push_back(item);
    }
  }

  if (!active.empty()) {
    // Seed centroids with distinct profiles picked in a seeded random order.
    Rng rng(seed);
    std::vector<std::uint32_t> shuffled = active;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<std::vector<double>> centroids(kk, std::vector<double>(num_features, 0.0));
    std::vector<std::uint32_t> chosen;
    for (std::uint32_t item : shuffled) {
      if (chosen.size() == kk) break;
      bool duplicate = std::any_of(chosen.begin(), chosen.end(),
                                   [&](std::uint32_t c) { return profiles[c] == profiles[item]; });
      if (duplicate) continue;
      for (const auto& e : profiles[item]) centroids[chosen.size()][e.id] = e.value;
      chosen.push_back(item);
    }

    const std::size_t na = active.size();
    std::vector<double> sims(na * kk);
    std::vector<std::size_t> order(na);
    std::vector<std::size_t> assignment(na);
    std::vector<std::size_t> cluster_rank(kk);

    for (int iter = 0; iter < std::max(1, max_iters); ++iter) {
      std::vector<double> margin(na);
      for (std::size_t i = 0; i < na; ++i) {
        double best = -INFINITY, second = -INFINITY;
        for (std::size_t c = 0; c < kk; ++c) {
          const double s = profiles[active[i]].dot(centroids[c]);
          sims[i * kk + c] = s;
          if (s > best) {
            second = best;
            best = s;
          } else if (s > second) {
            second = s;
          }
        }
        margin[i] = kk > 1 ? best - second : 0.0;
      }
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return margin[a] > margin[b]; });
      std::vector<std::size_t> left = capacity;
      for (std::size_t i : order) {
        std::iota(cluster_rank.begin(), cluster_rank.end(), std::size_t{0});
        std::stable_sort(cluster_rank.begin(), cluster_rank.end(), [&](std::size_t a, std::size_t b) {
          return sims[i * kk + a] > sims[i * kk + b];
        });
        for (std::size_t c : cluster_rank) {
          if (left[c] > 0) {
            assignment[i] = c;
            --left[c];
            break;
          }
        }
      }

      // Recompute centroids as normalized sums; track the largest move.
      std::vector<std::vector<double>> next(kk, std::vector<double>(num_features, 0.0));
      std::vector<std::size_t> members(kk, 0);
      for (std::size_t i = 0; i < na; ++i) {
        ++members[assignment[i]];
        for (const auto& e : profiles[active[i]]) next[assignment[i]][e.id] += e.value;
      }
      double movement = 0.0;
      for (std::size_t c = 0; c < kk; ++c) {
        if (members[c] == 0) {
          next[c] = centroids[c];
          continue;
        }
        double norm = 0.0;
        for (double v : next[c]) norm += v * v;
        norm = std::sqrt(norm);
        double moved = 0.0;
        for (std::size_t f = 0; f < num_features; ++f) {
          if (norm > 0.0) next[c][f] /= norm;
          const double diff = next[c][f] - centroids[c][f];
          moved += diff * diff;
        }
        movement = std::max(movement, std::sqrt(moved));
      }
      centroids = std::move(next);
      if (movement < epsilon) break;
    }
    for (std::size_t i = 0; i < na; ++i) clusters[assignment[i]].push_back(active[i]);
  }

  for (auto& c : clusters) std::sort(c.begin(), c.end());
  return clusters;
}

LabelTree build_kmeans_tree(const Dataset& data, const TreeConfig& cfg) {
  const std::size_t m = data.num_labels;
  if (m == 0) throw Error("build_kmeans_tree: no labels");
  if (cfg.arity < 2) throw Error("build_kmeans_tree: arity must be at least 2");
  if (cfg.max_leaf_cluster < 1) throw Error("build_kmeans_tree: max_leaf_cluster must be positive");

  const auto profiles = label_profiles(data);
  struct Task {
    NodeId node;
    std::vector<std::uint32_t> labels;
    std::uint64_t seed;
  };
  LabelTree tree;
  std::deque<Task> queue;
  {
    std::vector<std::uint32_t> all(m);
    std::iota(all.begin(), all.end(), std::uint32_t{0});
    queue.push_back({tree.root(), std::move(all), cfg.seed});
  }
  // Breadth-first so node ids follow creation order level by level.
  while (!queue.empty()) {
    Task task = std::move(queue.front());
    queue.pop_front();
    if (task.labels.size() <= cfg.max_leaf_cluster) {
      for (std::uint32_t l : task.labels) tree.assign_label(tree.add_child(task.node), l);
      continue;
    }
    auto clusters = balanced_kmeans(profiles, task.labels, cfg.arity, cfg.kmeans_epsilon,
                                    cfg.kmeans_max_iters, task.seed, data.num_features);
    for (std::size_t c = 0; c < clusters.size(); ++c)
      queue.push_back({tree.add_child(task.node), std::move(clusters[c]), derive_seed(task.seed, c)});
  }
  return tree;
}

LabelTree build_tree(const Dataset& data, const TreeConfig& cfg) {
  if (cfg.kind == TreeKind::kmeans) return build_kmeans_tree(data, cfg);
  const auto order = frequency_order(data);
  return build_complete_tree(data.num_labels, cfg, order);
}

}  // namespace plt
