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

#include <filesystem>
#include <iosfwd>

#include "plt/plt.hpp"

namespace plt {

inline constexpr int kModelFormatVersion = 1;

struct SaveOptions {
  bool checkpoint = false;        // also store accumulators and update counters
  bool feature_normalize = false;  // recorded so prediction repeats it
};

/// Model directory: tree.txt, weights.bin, meta.txt.
///
/// weights.bin holds, per node in id order, a little-endian uint32 count and
/// then `count` (uint32 feature id, float64 weight) pairs sorted by id. The
/// bias is the last pair, under the reserved id 0xFFFFFFFF. In checkpoint
/// mode each node record continues with `count` float64 accumulators in the
/// same order and a uint64 update counter.
void save_model(const PLTModel& model, const std::filesystem::path& dir, const SaveOptions& opts = {});

struct LoadedModel {
  PLTModel model;
  bool checkpoint = false;
  bool feature_normalize = false;
};

/// Throws ModelFormatError on a missing, truncated, corrupted or
/// version-mismatched directory.
LoadedModel load_model_dir(const std::filesystem::path& dir);
PLTModel load_model(const std::filesystem::path& dir);

void write_weights(const PLTModel& model, std::ostream& out, bool checkpoint);
/// Reads node records into `model.models` (sized from model.tree).
void read_weights(PLTModel& model, std::istream& in, bool checkpoint);

}  // namespace plt
