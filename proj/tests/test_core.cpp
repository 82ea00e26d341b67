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

#include <sstream>
#include <unordered_map>

#include "oracles.hpp"
#include "plt/errors.hpp"
#include "plt/label_tree.hpp"
#include "plt/robin_hood_map.hpp"
#include "plt/sparse.hpp"

using namespace plt;

namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset(in);
}

// 0 -> {1, 2}, 1 -> {3, 4}, 2 -> {5, 6}; leaves carry labels 0..3.
LabelTree seven_node_tree() {
  LabelTree t;
  for (NodeId p : {0u, 0u, 1u, 1u, 2u, 2u}) t.add_child(p);
  for (LabelId l = 0; l < 4; ++l) t.assign_label(3 + l, l);
  return t;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("parse a two-label example") {
  const Dataset d = parse("1 3 2\n0,1 0:1.5 2:0.5");
  REQUIRE(d.size() == 1);
  CHECK(d.num_features == 3);
  CHECK(d.num_labels == 2);
  CHECK(d.examples[0].labels == std::vector<LabelId>{0, 1});
  REQUIRE(d.examples[0].features.size() == 2);
  CHECK(d.examples[0].features.entries()[0] == FeatureValue{0, 1.5});
  CHECK(d.examples[0].features.entries()[1] == FeatureValue{2, 0.5});
}

TEST_CASE("parse an example without labels") {
  const Dataset d = parse("1 3 2\n 1:1.0");
  REQUIRE(d.size() == 1);
  CHECK(d.examples[0].labels.empty());
  CHECK(d.examples[0].features.size() == 1);
}

TEST_CASE("parse sorts features and drops zeros") {
  const Dataset d = parse("1 5 3\n2 4:1 0:0 1:-2");
  REQUIRE(d.examples[0].features.size() == 2);
  CHECK(d.examples[0].features.entries()[0].id == 1);
  CHECK(d.examples[0].features.entries()[1].id == 4);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse("2 3 2\n0 0:1"), ParseError);          // fewer lines than declared
  CHECK_THROWS_AS(parse("1 3 2\n0 0:1\n1 1:1"), ParseError);   // more lines than declared
  CHECK_THROWS_AS(parse("1 3 2\n0 3:1"), RangeError);          // feature id out of range
  CHECK_THROWS_AS(parse("1 3 2\n2 0:1"), RangeError);          // label id out of range
  CHECK_THROWS_AS(parse("1 3 2\n0 0:1 0:2"), ParseError);      // duplicate feature
  CHECK_THROWS_AS(parse("1 3 2\n0,0 0:1"), ParseError);        // duplicate label
  CHECK_THROWS_AS(parse("1 3 2\n0 0:x"), ParseError);
  CHECK_THROWS_AS(parse("1 3 2\n0 0:nan"), ParseError);
  CHECK_THROWS_AS(parse("1 3\n0 0:1"), ParseError);            // short header
  try {
    parse("3 3 2\n0 0:1\n1 1:1\n0 zz");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("serialize then parse is the identity") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset d;
    d.num_features = 1 + rng() % 40;
    d.num_labels = 1 + rng() % 20;
    const std::size_t n = rng() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      Example ex;
      ex.features = oracle::random_sparse(d.num_features, rng() % 6, rng);
      for (LabelId l = 0; l < d.num_labels; ++l)
        if (rng() % 4 == 0) ex.labels.push_back(l);
      d.examples.push_back(std::move(ex));
    }
    std::ostringstream out;
    serialize_dataset(d, out);
    CHECK(parse(out.str()) == d);
  }
}

TEST_CASE("sparse vector basics") {
  const auto v = SparseVector::from_entries({{3, 4.0}, {0, 3.0}});
  CHECK(v.l2_norm() == doctest::Approx(5.0));
  CHECK(v.dimension() == 4);
  std::vector<double> dense{1, 0, 0, 2};
  CHECK(v.dot(dense) == doctest::Approx(11.0));
  CHECK(v.dot(SparseVector::from_entries({{3, 1.0}, {1, 7.0}})) == doctest::Approx(4.0));
  auto u = v;
  u.normalize();
  CHECK(u.l2_norm() == doctest::Approx(1.0));
  SparseVector z;
  z.normalize();
  CHECK(z.empty());
  CHECK_THROWS_AS(SparseVector::from_entries({{1, 1.0}, {1, 2.0}}), Error);
}

TEST_CASE("path to root") {
  const LabelTree t = seven_node_tree();
  CHECK(path_to_root(t, 3) == std::vector<NodeId>{3, 1, 0});
  CHECK(path_to_root(t, 0) == std::vector<NodeId>{0});
  CHECK_THROWS_AS(path_to_root(t, 99), RangeError);

  LabelTree chain;
  NodeId v = chain.root();
  for (int i = 0; i < 10; ++i) v = chain.add_child(v);
  CHECK(path_to_root(chain, v).size() == 11);
}

TEST_CASE("tree stats") {
  CHECK(tree_stats(seven_node_tree()) == TreeStats{2, 2, 4});
  CHECK(tree_stats(LabelTree{}) == TreeStats{0, 0, 1});
  LabelTree star;
  for (LabelId l = 0; l < 16; ++l) star.assign_label(star.add_child(0), l);
  CHECK(tree_stats(star) == TreeStats{1, 16, 16});
}

TEST_CASE("validate tree") {
  CHECK(validate_tree(seven_node_tree(), 4).ok);
  CHECK_FALSE(validate_tree(seven_node_tree(), 5).ok);

  const LabelTree base = seven_node_tree();
  auto nodes = std::vector<TreeNode>(base.nodes().begin(), base.nodes().end());
  auto dup = nodes;
  dup[4].label = 0;
  const auto r1 = validate_tree(LabelTree::from_nodes(dup, 0), 4);
  CHECK_FALSE(r1.ok);
  CHECK(r1.message.find("duplicate label") != std::string::npos);

  auto two_parents = nodes;
  two_parents[2].children.push_back(3);
  const auto r2 = validate_tree(LabelTree::from_nodes(two_parents, 0));
  CHECK_FALSE(r2.ok);
  CHECK(r2.message.find("not a tree") != std::string::npos);

  auto unlabeled = nodes;
  unlabeled[6].label = kNoLabel;
  CHECK_FALSE(validate_tree(LabelTree::from_nodes(unlabeled, 0), 3).ok);
  CHECK(validate_tree(LabelTree::from_nodes(unlabeled, 0)).ok);  // not finalized: allowed
}

TEST_CASE("labels live on leaves") {
  LabelTree t;
  const NodeId a = t.add_child(0);
  t.assign_label(a, 0);
  CHECK_THROWS_AS(t.add_child(a), TreeError);
  CHECK_THROWS_AS(t.assign_label(0, 1), TreeError);
}

TEST_CASE("insert below moves a label or the children") {
  LabelTree t;
  t.assign_label(0, 7);
  const NodeId v = t.insert_below(0);
  CHECK_FALSE(t.node(0).has_label());
  CHECK(t.node(v).label == 7);
  CHECK(t.leaf(7) == v);
  const NodeId w = t.add_child(0);
  t.assign_label(w, 8);
  const NodeId u = t.insert_below(0);
  CHECK(t.node(0).children == std::vector<NodeId>{u});
  CHECK(t.node(u).children == std::vector<NodeId>{v, w});
  CHECK(t.node(v).parent == u);
  CHECK(validate_tree(t, std::nullopt).ok);
}

TEST_CASE("random trees: edge count and size bound") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 60;
    const LabelTree t = oracle::random_tree(m, 2 + rng() % 6, rng);
    REQUIRE(validate_tree(t, m).ok);
    std::size_t degrees = 0;
    for (const auto& n : t.nodes()) degrees += n.children.size();
    CHECK(degrees == t.size() - 1);
    CHECK(t.size() <= 2 * m - 1);
  }
}

TEST_CASE("tree file round trip") {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const LabelTree t = oracle::random_tree(1 + rng() % 40, 4, rng);
    std::stringstream s;
    write_tree(t, s);
    CHECK(read_tree(s) == t);
  }
  std::istringstream bad("0 -1 -1\n1 0 0\n2 1 1\n2 0 2\n");
  CHECK_THROWS(read_tree(bad));
}

TEST_CASE("robin hood map agrees with a reference map") {
  Rng rng(3);
  RobinHoodMap<int> map;
  std::unordered_map<std::uint32_t, int> ref;
  for (int step = 0; step < 200000; ++step) {
    const std::uint32_t k = static_cast<std::uint32_t>(rng() % 3000);
    switch (rng() % 3) {
      case 0: map[k] = step; ref[k] = step; break;
      case 1: CHECK(map.erase(k) == (ref.erase(k) == 1)); break;
      default: {
        const int* v = map.find(k);
        auto it = ref.find(k);
        REQUIRE((v != nullptr) == (it != ref.end()));
        if (v) CHECK(*v == it->second);
      }
    }
    if (step % 997 == 0) {
      CHECK(map.size() == ref.size());
      CHECK(map.size() * 10 <= map.capacity() * 9);
    }
  }
  std::size_t seen = 0;
  for (auto [k, v] : map) {
    CHECK(ref.at(k) == v);
    ++seen;
  }
  CHECK(seen == ref.size());
  map.erase_if([](std::uint32_t k, int) { return k % 2 == 0; });
  for (auto [k, v] : map) CHECK(k % 2 == 1);
}

TEST_CASE("l2 normalization and label frequencies") {
  Dataset d = parse("2 3 3\n0,2 0:3 1:4\n2 2:5");
  l2_normalize(d);
  CHECK(d.examples[0].features.l2_norm() == doctest::Approx(1.0));
  CHECK(d.examples[1].features.entries()[0].value == doctest::Approx(1.0));
  CHECK(label_frequencies(d) == std::vector<std::size_t>{1, 0, 2});
}

}  // TEST_SUITE
