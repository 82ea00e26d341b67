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

#include <cstddef>
#include <filesystem>
#include <vector>

#include "plt/inference.hpp"
#include "plt/model_io.hpp"
#include "plt/plt.hpp"
#include "plt/tree_build.hpp"

namespace plt {

/// Several PLTs over the same labels, differing only in their trees.
struct Ensemble {
  std::vector<PLTModel> members;
};

/// How a label missing from one member's top-k list is scored for that member.
enum class MissingScore {
  zero,  // contributes 0
  path,  // exact estimate from that member's tree
};

/// Averages member scores over the union of member top-k lists and returns
/// the k best, ties broken by label id.
TopKResult ensemble_predict_top_k(const Ensemble& ens, const SparseVector& x, std::size_t k,
                                  MissingScore missing = MissingScore::zero);

/// Trains `members` PLTs. Member i builds its tree with seed
/// derive_seed(tree_cfg.seed, i); all other settings are shared.
Ensemble train_ensemble(const Dataset& data, std::size_t members, const TreeConfig& tree_cfg,
                        const TrainConfig& cfg, LossKind loss, unsigned threads = 1);

/// Directory with ensemble.txt and one model directory per member.
void save_ensemble(const Ensemble& ens, const std::filesystem::path& dir, const SaveOptions& opts = {});
Ensemble load_ensemble(const std::filesystem::path& dir);
bool is_ensemble_dir(const std::filesystem::path& dir);

}  // namespace plt
