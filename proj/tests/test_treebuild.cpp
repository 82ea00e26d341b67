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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "plt/errors.hpp"
#include "plt/tree_build.hpp"

using namespace plt;

namespace {

std::vector<LabelId> leaves_left_to_right(const LabelTree& t) {
  std::vector<LabelId> out;
  std::vector<NodeId> stack{t.root()};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const auto& n = t.node(v);
    if (n.is_leaf()) out.push_back(n.label);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::size_t leaves_below(const LabelTree& t, NodeId v) {
  if (t.is_leaf(v)) return 1;
  std::size_t s = 0;
  for (NodeId c : t.node(v).children) s += leaves_below(t, c);
  return s;
}

Dataset random_dataset(std::size_t n, std::size_t f, std::size_t m, Rng& rng) {
  Dataset d;
  d.num_features = f;
  d.num_labels = m;
  for (std::size_t i = 0; i < n; ++i) {
    Example ex;
    ex.features = oracle::random_sparse(f, 1 + rng() % 5, rng);
    std::set<LabelId> ls;
    for (int j = 0; j < 3; ++j) ls.insert(static_cast<LabelId>(rng() % m));
    ex.labels.assign(ls.begin(), ls.end());
    d.examples.push_back(std::move(ex));
  }
  return d;
}

std::string serialized(const LabelTree& t) {
  std::ostringstream s;
  write_tree(t, s);
  return s.str();
}

}  // namespace

TEST_SUITE("treebuild") {

TEST_CASE("complete binary tree over four labels") {
  TreeConfig cfg;
  cfg.arity = 2;
  const LabelTree t = build_complete_tree(4, cfg);
  CHECK(t.size() == 7);
  CHECK(tree_stats(t).depth == 2);
  CHECK(leaves_left_to_right(t) == std::vector<LabelId>{0, 1, 2, 3});
}

TEST_CASE("complete tree with one label is a labeled root") {
  const LabelTree t = build_complete_tree(1, TreeConfig{});
  CHECK(t.size() == 1);
  CHECK(t.node(0).label == 0);
  CHECK_THROWS_AS(build_complete_tree(0, TreeConfig{}), Error);
}

TEST_CASE("complete tree matches the array-grown reference") {
  for (std::size_t k = 2; k <= 5; ++k) {
    for (std::size_t m = 1; m <= 80; ++m) {
      TreeConfig cfg;
      cfg.arity = k;
      std::vector<LabelId> order(m);
      std::iota(order.rbegin(), order.rend(), LabelId{0});  // reversed order
      const LabelTree t = build_complete_tree(m, cfg, order);
      const auto ref = oracle::grown_complete_parents(m, k);
      REQUIRE(t.size() == ref.size());
      for (NodeId v = 0; v < t.size(); ++v) CHECK(t.node(v).parent == ref[v]);
      CHECK(validate_tree(t, m).ok);
      CHECK(leaves_left_to_right(t) == order);
      const auto depth = static_cast<double>(tree_stats(t).depth);
      CHECK(depth <= std::ceil(std::log(static_cast<double>(m)) / std::log(static_cast<double>(k)) - 1e-9) + 1);
    }
  }
}

TEST_CASE("five labels, binary") {
  TreeConfig cfg;
  const LabelTree t = build_complete_tree(5, cfg);
  CHECK(t.size() == 9);
  CHECK(tree_stats(t).num_leaves == 5);
  CHECK(tree_stats(t).depth == 3);
  std::size_t deepest = 0;
  for (NodeId v = 0; v < t.size(); ++v)
    if (t.is_leaf(v) && path_to_root(t, v).size() == 4) ++deepest;
  CHECK(deepest == 2);  // one node at depth 3 with its two leaves
}

TEST_CASE("label profiles") {
  Dataset d;
  d.num_features = 3;
  d.num_labels = 3;
  d.examples.push_back({SparseVector::from_entries({{0, 2.0}}), {0}});
  auto p = label_profiles(d);
  CHECK(p[0] == SparseVector::from_entries({{0, 1.0}}));
  CHECK(p[1].empty());

  d.examples.clear();
  d.examples.push_back({SparseVector::from_entries({{0, 1.0}}), {0}});
  d.examples.push_back({SparseVector::from_entries({{1, 1.0}}), {0}});
  p = label_profiles(d);
  REQUIRE(p[0].size() == 2);
  CHECK(p[0].entries()[0].value == doctest::Approx(std::sqrt(0.5)));
  CHECK(p[0].entries()[1].value == doctest::Approx(std::sqrt(0.5)));
  CHECK(p[2].empty());
}

TEST_CASE("k-means tree base case") {
  Rng rng(1);
  const Dataset d = random_dataset(50, 10, 7, rng);
  TreeConfig cfg;
  const LabelTree t = build_kmeans_tree(d, cfg);
  CHECK(t.size() == 8);
  CHECK(t.node(0).children.size() == 7);
  CHECK(validate_tree(t, 7).ok);
}

TEST_CASE("k-means separates orthogonal label pairs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Dataset d;
    d.num_features = 2;
    d.num_labels = 4;
    d.examples.push_back({SparseVector::from_entries({{0, 1.0}}), {0, 2}});
    d.examples.push_back({SparseVector::from_entries({{1, 1.0}}), {1, 3}});
    TreeConfig cfg;
    cfg.max_leaf_cluster = 2;
    cfg.seed = seed;
    const LabelTree t = build_kmeans_tree(d, cfg);
    REQUIRE(t.node(0).children.size() == 2);
    std::set<std::set<LabelId>> groups;
    for (NodeId c : t.node(0).children) {
      std::set<LabelId> g;
      for (NodeId l : t.node(c).children) g.insert(t.node(l).label);
      groups.insert(g);
    }
    CHECK(groups == std::set<std::set<LabelId>>{{0, 2}, {1, 3}});
  }
}

TEST_CASE("k-means tree over 300 labels is balanced") {
  Rng rng(2);
  const Dataset d = random_dataset(2000, 50, 300, rng);
  TreeConfig cfg;
  cfg.max_leaf_cluster = 100;
  const LabelTree t = build_kmeans_tree(d, cfg);
  REQUIRE(validate_tree(t, 300).ok);
  for (NodeId v = 0; v < t.size(); ++v) {
    const auto& ch = t.node(v).children;
    if (ch.empty()) continue;
    const bool pre_leaf = std::all_of(ch.begin(), ch.end(), [&](NodeId c) { return t.is_leaf(c); });
    if (pre_leaf) {
      CHECK(ch.size() <= 100);
    } else {
      CHECK(ch.size() == 2);
      const auto a = leaves_below(t, ch[0]), b = leaves_below(t, ch[1]);
      CHECK((a > b ? a - b : b - a) <= 1);
    }
  }
}

TEST_CASE("k-means handles labels without examples and higher arity") {
  Rng rng(4);
  Dataset d = random_dataset(300, 20, 40, rng);
  d.num_labels = 50;  // labels 40..49 never occur
  TreeConfig cfg;
  cfg.arity = 3;
  cfg.max_leaf_cluster = 4;
  const LabelTree t = build_kmeans_tree(d, cfg);
  CHECK(validate_tree(t, 50).ok);
  for (NodeId v = 0; v < t.size(); ++v) {
    const auto& ch = t.node(v).children;
    if (ch.empty() || t.is_leaf(ch[0])) continue;
    std::size_t lo = SIZE_MAX, hi = 0;
    for (NodeId c : ch) {
      lo = std::min(lo, leaves_below(t, c));
      hi = std::max(hi, leaves_below(t, c));
    }
    CHECK(hi - lo <= 1);
  }
}

TEST_CASE("tree building is deterministic") {
  Rng rng(6);
  const Dataset d = random_dataset(500, 30, 64, rng);
  TreeConfig cfg;
  cfg.max_leaf_cluster = 8;
  cfg.seed = 17;
  CHECK(serialized(build_kmeans_tree(d, cfg)) == serialized(build_kmeans_tree(d, cfg)));
  cfg.kind = TreeKind::complete;
  CHECK(serialized(build_tree(d, cfg)) == serialized(build_tree(d, cfg)));
}

TEST_CASE("complete trees order leaves by label frequency") {
  Dataset d;
  d.num_features = 1;
  d.num_labels = 3;
  const auto x = SparseVector::from_entries({{0, 1.0}});
  d.examples = {{x, {2}}, {x, {2}}, {x, {1, 2}}};
  TreeConfig cfg;
  cfg.kind = TreeKind::complete;
  CHECK(frequency_order(d) == std::vector<LabelId>{2, 1, 0});
  CHECK(leaves_left_to_right(build_tree(d, cfg)) == std::vector<LabelId>{2, 1, 0});
}

}  // TEST_SUITE
