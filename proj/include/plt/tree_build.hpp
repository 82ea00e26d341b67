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
#include "plt/sparse.hpp"

namespace plt {

enum class TreeKind { complete, kmeans };

struct TreeConfig {
  TreeKind kind = TreeKind::kmeans;
  std::size_t arity = 2;
  std::size_t max_leaf_cluster = 100;  // degree cap of pre-leaf nodes
  double kmeans_epsilon = 1e-4;
  int kmeans_max_iters = 100;
  std::uint64_t seed = 0;
};

/// Complete `arity`-ary tree stored as an array (children of slot i are
/// slots k*i+1 .. k*i+k) with the fewest nodes giving m leaves. Leaves, read
/// left to right, carry the labels of `label_order`.
LabelTree build_complete_tree(std::size_t m, const TreeConfig& cfg,
                              std::span<const LabelId> label_order);

/// Same with the identity label order.
LabelTree build_complete_tree(std::size_t m, const TreeConfig& cfg);

/// Labels sorted by descending frequency, ties by ascending id.
std::vector<LabelId> frequency_order(const Dataset& data);

/// Per-label mean of the feature vectors of its positive examples, unit
/// normalized. Unobserved labels get the zero vector.
std::vector<SparseVector> label_profiles(const Dataset& data);

/// Top-down hierarchical balanced spherical k-means over label profiles.
LabelTree build_kmeans_tree(const Dataset& data, const TreeConfig& cfg);

/// Balanced spherical k-means of `items` (indices into `profiles`) into
/// min(k, |items|) clusters whose sizes differ by at most one. Exposed for
/// testing; clusters are returned with their members in ascending order.
std::vector<std::vector<std::uint32_t>> balanced_kmeans(std::span<const SparseVector> profiles,
                                                        std::span<const std::uint32_t> items,
                                                        std::size_t k, double epsilon,
                                                        int max_iters, std::uint64_t seed,
                                                        std::size_t num_features);

/// Dispatches on cfg.kind; complete trees use the frequency order.
LabelTree build_tree(const Dataset& data, const TreeConfig& cfg);

}  // namespace plt
