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
#include <span>
#include <utility>
#include <vector>

namespace plt {

using FeatureId = std::uint32_t;
using LabelId = std::uint32_t;

struct FeatureValue {
  FeatureId id;
  double value;

  friend bool operator==(const FeatureValue&, const FeatureValue&) = default;
};

/// Sparse real vector: entries sorted strictly ascending by id, every value
/// finite and non-zero.
class SparseVector {
 public:
  SparseVector() = default;

  /// Sorts the entries and drops zeros. Throws on duplicate ids or
  /// non-finite values.
  static SparseVector from_entries(std::vector<FeatureValue> entries);

  /// Dense-to-sparse: component i becomes feature id i.
  static SparseVector from_dense(std::span<const double> values);

  std::span<const FeatureValue> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  /// Largest id + 1, or 0 for the empty vector.
  FeatureId dimension() const noexcept {
    return entries_.empty() ? 0 : entries_.back().id + 1;
  }

  double l2_norm() const noexcept;
  double dot(std::span<const double> dense) const noexcept;
  double dot(const SparseVector& other) const noexcept;

  /// Scales to unit L2 norm; the zero vector stays zero.
  void normalize();

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<FeatureValue> entries_;
};

struct Example {
  SparseVector features;
  std::vector<LabelId> labels;  // sorted, unique, possibly empty

  friend bool operator==(const Example&, const Example&) = default;
};

struct Dataset {
  std::vector<Example> examples;
  std::size_t num_features = 0;
  std::size_t num_labels = 0;

  std::size_t size() const noexcept { return examples.size(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Reads the multi-label text format: a header "N F M" followed by N lines
/// "l1,l2,... f1:v1 f2:v2 ...". An empty label field (line starting with a
/// space) gives an example with no labels.
Dataset parse_dataset(std::istream& in);

void serialize_dataset(const Dataset& data, std::ostream& out);

/// Unit-normalizes every instance in place.
void l2_normalize(Dataset& data);

/// Per-label count of positive examples.
std::vector<std::size_t> label_frequencies(const Dataset& data);

}  // namespace plt
