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
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "plt/robin_hood_map.hpp"
#include "plt/sparse.hpp"

namespace plt {

enum class LossKind { logistic, squared_hinge };

std::string_view to_string(LossKind loss);
/// Accepts "logistic"/"log" and "squared_hinge"/"squared-hinge"/"s.h.".
LossKind parse_loss(std::string_view name);

/// Probability link psi^{-1}: score -> [0,1]. The logistic branch is clamped
/// away from exactly 0 and 1.
double inverse_link(LossKind loss, double score) noexcept;
/// Link psi: probability -> score.
double link(LossKind loss, double prob) noexcept;

/// Per-example loss at score f for a binary target.
double loss_value(LossKind loss, double score, int target) noexcept;

/// d loss / d score. Written in the margin form so that
/// loss_derivative(-f, 1 - t) == -loss_derivative(f, t) holds bit-exactly.
double loss_derivative(LossKind loss, double score, int target) noexcept;

struct TrainConfig {
  double learning_rate = 0.2;
  double adagrad_epsilon = 0.001;
  int epochs = 3;
  double prune_threshold = 0.1;
  std::uint64_t seed = 0;
  bool shuffle = false;  // reshuffle examples every epoch with `seed`
};

/// Sparse linear probability estimator with an implicit bias feature,
/// trained incrementally with AdaGrad.
class NodeModel {
 public:
  struct Param {
    double weight = 0.0;
    double accum = 0.0;  // sum of squared gradients
  };

  explicit NodeModel(LossKind loss = LossKind::logistic) : loss_(loss) {}

  LossKind loss() const noexcept { return loss_; }
  std::uint64_t update_count() const noexcept { return updates_; }

  double score(const SparseVector& x) const noexcept;
  double predict_prob(const SparseVector& x) const noexcept {
    return inverse_link(loss_, score(x));
  }

  /// One AdaGrad step on (x, target) with the gradient scaled by `weight`.
  /// Throws TrainingDiverged on a non-finite intermediate.
  void update(const SparseVector& x, int target, const TrainConfig& cfg, double weight = 1.0);

  /// Drops weights with |w| < threshold together with their accumulators.
  /// The bias is never pruned.
  void prune(double threshold);

  /// Model with negated weights and identical accumulators: it predicts
  /// 1 - p and evolves under target t exactly as this model would under 1 - t.
  NodeModel inverse_view() const;

  double weight(FeatureId f) const noexcept;
  double accum(FeatureId f) const noexcept;
  const Param& bias() const noexcept { return bias_; }
  std::size_t num_weights() const noexcept { return params_.size(); }
  const RobinHoodMap<Param>& params() const noexcept { return params_; }

  /// Parameters sorted by feature id.
  std::vector<std::pair<FeatureId, Param>> sorted_params() const;

  void set_param(FeatureId f, Param p) { params_[f] = p; }
  void set_bias(Param p) noexcept { bias_ = p; }
  void set_update_count(std::uint64_t n) noexcept { updates_ = n; }

  /// Size of the node's record in the binary weights file.
  std::size_t serialized_bytes(bool checkpoint = false) const noexcept;

  /// Exact state equality: loss, counter and the bit patterns of every weight
  /// and accumulator.
  friend bool operator==(const NodeModel& a, const NodeModel& b);

 private:
  RobinHoodMap<Param> params_;
  Param bias_;
  LossKind loss_;
  std::uint64_t updates_ = 0;
};

inline NodeModel copy_model(const NodeModel& m) { return m; }
inline NodeModel inverse_view(const NodeModel& m) { return m.inverse_view(); }
inline NodeModel prune(NodeModel m, double threshold) {
  m.prune(threshold);
  return m;
}

}  // namespace plt
