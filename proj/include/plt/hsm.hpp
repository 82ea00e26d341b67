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

#include <vector>

#include "plt/plt.hpp"
#include "plt/synth.hpp"

namespace plt {

struct WeightedExample {
  SparseVector features;
  LabelId label;
  double weight;  // 1 / number of labels of the originating example
};

/// One weighted single-label example per positive label, in the original
/// example order and then ascending label. Examples without labels vanish.
std::vector<WeightedExample> pick_one_label_transform(const Dataset& data);

/// Hierarchical softmax with the pick-one-label heuristic: the same node
/// learners and schedule as train(), fed the transformed weighted stream.
/// The returned model normalizes sibling estimates at prediction time.
PLTModel hsm_train(const LabelTree& tree, const Dataset& data, const TrainConfig& cfg,
                   LossKind loss);

/// Marginals seen by a learner trained on pick-one-label data:
/// eta'_j = sum_y (y_j / |y|) P(y). Throws if `dist` is not normalized.
std::vector<double> pick_one_label_marginals(const LabelDistribution& dist);

}  // namespace plt
