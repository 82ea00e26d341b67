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
#include <utility>
#include <vector>

#include "plt/label_tree.hpp"
#include "plt/random.hpp"
#include "plt/sparse.hpp"

namespace plt {

enum class SynthKind { multiclass, independent, dependent };

struct SynthConfig {
  std::size_t d = 3;
  std::size_t m = 32;
  std::size_t n = 100000;
  SynthKind kind = SynthKind::multiclass;
  double noise_sd = 0.5;  // standard deviation of the dependent model's noise
  std::uint64_t seed = 0;
  std::size_t oracle_samples = 10000;  // noise draws per dependent-model query
};

/// Parameters of a synthetic generator, plus its conditional-probability oracle.
struct SynthModel {
  SynthKind kind = SynthKind::multiclass;
  std::size_t d = 0;
  std::size_t m = 0;
  std::vector<std::vector<double>> w;       // m vectors on the unit sphere
  std::vector<std::vector<double>> mixing;  // m x m, dependent model only
  double noise_sd = 0.5;
  std::size_t oracle_samples = 10000;

  /// Label probabilities at x: exact for the multiclass (softmax) and
  /// independent (logistic) models, a Monte-Carlo average over
  /// `oracle_samples` noise draws for the dependent model.
  std::vector<double> marginals(std::span<const double> x, std::uint64_t oracle_seed = 0) const;

  std::vector<LabelId> sample_labels(std::span<const double> x, Rng& rng) const;
};

struct SynthData {
  Dataset dataset;
  std::vector<std::vector<double>> points;  // dense copy of every instance
  SynthModel model;
};

std::vector<double> sample_unit_sphere(std::size_t d, Rng& rng);
std::vector<double> sample_unit_ball(std::size_t d, Rng& rng);

/// Draws the generator parameters from cfg.seed.
SynthModel make_synth_model(const SynthConfig& cfg);

/// n instances from `model`; instance i uses its own generator seeded from
/// (seed, i), so the output does not depend on how the work is split.
SynthData sample_synth(const SynthModel& model, std::size_t n, std::uint64_t seed);

SynthData generate_synth(const SynthConfig& cfg);
SynthData gen_multiclass(SynthConfig cfg);
SynthData gen_independent(SynthConfig cfg);
SynthData gen_dependent(SynthConfig cfg);

/// First half / second half.
std::pair<Dataset, Dataset> split_half(const Dataset& data);

/// An explicit distribution of label vectors for one instance. Bit j of a
/// mask is label j.
struct LabelDistribution {
  std::size_t m = 0;
  std::vector<std::pair<std::uint64_t, double>> atoms;

  /// Throws unless probabilities are non-negative, masks fit in m bits and
  /// the total is 1 within `tol`.
  void validate(double tol = 1e-12) const;

  std::vector<double> marginals() const;
  /// Probability that at least one label of `mask` is present.
  double any_of(std::uint64_t mask) const;

  /// Expected precision@k of predicting `labels` (k = labels.size()),
  /// computed from the atoms directly.
  double expected_precision(std::span<const LabelId> labels) const;

  /// Product distribution over all 2^m label vectors.
  static LabelDistribution independent(std::span<const double> eta);
};

/// Exact node conditionals P(z_v = 1 | z_pa(v) = 1) of `dist` on `tree`
/// (the root's is P(z_root = 1)); 0 where the parent has zero probability.
std::vector<double> node_conditionals(const LabelDistribution& dist, const LabelTree& tree);

}  // namespace plt
