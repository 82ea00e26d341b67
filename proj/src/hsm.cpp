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

#include "plt/hsm.hpp"

#include <bit>

#include "plt/errors.hpp"

namespace plt {

std::vector<WeightedExample> pick_one_label_transform(const Dataset& data) {
  std::vector<WeightedExample> out;
  for (const auto& ex : data.examples) {
    if (ex.labels.empty()) continue;
    const double w = 1.0 / static_cast<double>(ex.labels.size());
    for (LabelId l : ex.labels) out.push_back({ex.features, l, w});
  }
  return out;
}

PLTModel hsm_train(const LabelTree& tree, const Dataset& data, const TrainConfig& cfg, LossKind loss) {
  const auto stream = pick_one_label_transform(data);
  for (const auto& ex : stream)
    if (!tree.has_label(ex.label))
      throw RangeError("label " + std::to_string(ex.label) + " has no leaf in the tree");
  PLTModel model = PLTModel::fresh(tree, loss);
  model.normalize_siblings = true;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i : epoch_order(stream.size(), cfg, epoch)) {
      const LabelId label = stream[i].label;
      apply_example(model, stream[i].features, std::span<const LabelId>(&label, 1), cfg, stream[i].weight);
    }
  }
  return model;
}

std::vector<double> pick_one_label_marginals(const LabelDistribution& dist) {
  dist.validate();
  std::vector<double> eta(dist.m, 0.0);
  for (const auto& [y, p] : dist.atoms) {
    const int count = std::popcount(y);
    if (count == 0) continue;
    for (std::size_t j = 0; j < dist.m; ++j)
      if ((y >> j) & 1U) eta[j] += p / count;
  }
  return eta;
}

}  // namespace plt
