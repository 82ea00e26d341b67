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

#include "plt/inference.hpp"

namespace plt {

/// Mean over examples of (hits among the first k predictions) / k.
/// Throws if some prediction has fewer than k entries.
double precision_at_k(std::span<const TopKResult> predictions,
                      std::span<const std::vector<LabelId>> truths, std::size_t k);

/// Mean over examples with a non-empty truth set of hits / |truth|.
double recall_at_k(std::span<const TopKResult> predictions,
                   std::span<const std::vector<LabelId>> truths, std::size_t k);

struct LabelCounts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Per-label confusion counts. True negatives are derived from the example
/// count, so adding an example costs O(|predicted| + |truth|).
class ConfusionCounts {
 public:
  explicit ConfusionCounts(std::size_t num_labels) : tp_(num_labels), fp_(num_labels), fn_(num_labels) {}

  /// Both label lists sorted ascending.
  void add(std::span<const LabelId> predicted, std::span<const LabelId> truth);
  void merge(const ConfusionCounts& other);

  std::size_t num_labels() const noexcept { return tp_.size(); }
  std::uint64_t examples() const noexcept { return examples_; }
  LabelCounts label(LabelId j) const;
  LabelCounts totals() const;

 private:
  std::vector<std::uint64_t> tp_, fp_, fn_;
  std::uint64_t examples_ = 0;
};

enum class MetricKind { hamming, f_beta, jaccard, am };
enum class Averaging { macro, micro };

struct MetricSpec {
  MetricKind kind = MetricKind::f_beta;
  double beta = 1.0;
  Averaging averaging = Averaging::macro;
};

/// Psi(FP, FN) = (a0 + a1 FP + a2 FN) / (b0 + b1 FP + b2 FN), with FP and FN
/// expressed as rates.
struct LinearFractional {
  double a0, a1, a2, b0, b1, b2;

  double numerator(double fp, double fn) const noexcept { return a0 + a1 * fp + a2 * fn; }
  double denominator(double fp, double fn) const noexcept { return b0 + b1 * fp + b2 * fn; }
  double operator()(double fp, double fn) const noexcept {
    return numerator(fp, fn) / denominator(fp, fn);
  }
};

/// Coefficients of a metric for positive-label rate `prior`.
LinearFractional metric_form(const MetricSpec& spec, double prior);

struct MetricValue {
  double value = 0.0;            // NaN when undefined
  bool defined = true;
  double min_denominator = 0.0;  // smallest denominator met while evaluating
  std::size_t undefined_labels = 0;  // macro only: labels left out of the mean
};

/// Evaluates a generalized metric. A denominator below `gamma` makes the
/// per-label (macro) or the global (micro) value undefined; undefined labels
/// are left out of the macro mean.
MetricValue evaluate_generalized(const ConfusionCounts& counts, const MetricSpec& spec,
                                 double gamma = 1e-12);

/// Threshold on marginals that is optimal for the metric, given the optimal
/// metric value psi_star and the prior.
double optimal_threshold(const MetricSpec& spec, double psi_star, double prior);

/// Online F-measure optimization: predict score > tau, then
/// a += hits, b += truths + predictions, tau = a / b.
class OfoTuner {
 public:
  bool predict(double score) const noexcept { return score > threshold(); }
  void observe(double score, bool truth) noexcept;
  /// Batch form for one example with several labels.
  void observe_counts(std::uint64_t hits, std::uint64_t predicted, std::uint64_t actual) noexcept;

  double threshold() const noexcept { return b_ == 0 ? 0.0 : static_cast<double>(a_) / static_cast<double>(b_); }
  std::uint64_t a() const noexcept { return a_; }
  std::uint64_t b() const noexcept { return b_; }

 private:
  std::uint64_t a_ = 0;
  std::uint64_t b_ = 0;
};

double ofo_tune(std::span<const std::pair<double, int>> stream);

}  // namespace plt
