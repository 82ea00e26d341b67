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

#include "plt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plt/errors.hpp"

namespace plt {

namespace {

std::size_t hits_in_top(const TopKResult& pred, std::span<const LabelId> truth, std::size_t k) {
  if (pred.size() < k)
    throw Error("prediction has " + std::to_string(pred.size()) + " labels, fewer than k=" +
                std::to_string(k));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i)
    if (std::find(truth.begin(), truth.end(), pred[i].label) != truth.end()) ++hits;
  return hits;
}

void check_sizes(std::size_t predictions, std::size_t truths, std::size_t k) {
  if (predictions != truths) throw Error("predictions and truths differ in length");
  if (k == 0) throw Error("k must be positive");
}

}  // namespace

double precision_at_k(std::span<const TopKResult> predictions,
                      std::span<const std::vector<LabelId>> truths, std::size_t k) {
  check_sizes(predictions.size(), truths.size(), k);
  if (predictions.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    sum += static_cast<double>(hits_in_top(predictions[i], truths[i], k)) / static_cast<double>(k);
  return sum / static_cast<double>(predictions.size());
}

double recall_at_k(std::span<const TopKResult> predictions,
                   std::span<const std::vector<LabelId>> truths, std::size_t k) {
  check_sizes(predictions.size(), truths.size(), k);
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (truths[i].empty()) continue;
    sum += static_cast<double>(hits_in_top(predictions[i], truths[i], k)) /
           static_cast<double>(truths[i].size());
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

void ConfusionCounts::add(std::span<const LabelId> predicted, std::span<const LabelId> truth) {
  auto p = predicted.begin();
  auto t = truth.begin();
  auto check = [&](LabelId l) {
    if (l >= tp_.size()) throw RangeError("label " + std::to_string(l) + " outside the count table");
  };
  while (p != predicted.end() || t != truth.end()) {
    if (t == truth.end() || (p != predicted.end() && *p < *t)) {
      check(*p);
      ++fp_[*p++];
    } else if (p == predicted.end() || *t < *p) {
      check(*t);
      ++fn_[*t++];
    } else {
      check(*p);
      ++tp_[*p];
      ++p;
      ++t;
    }
  }
  ++examples_;
}

void ConfusionCounts::merge(const ConfusionCounts& other) {
  if (other.num_labels() != num_labels()) throw Error("merging counts over different label spaces");
  for (std::size_t j = 0; j < tp_.size(); ++j) {
    tp_[j] += other.tp_[j];
    fp_[j] += other.fp_[j];
    fn_[j] += other.fn_[j];
  }
  examples_ += other.examples_;
}

LabelCounts ConfusionCounts::label(LabelId j) const {
  LabelCounts c{tp_.at(j), fp_.at(j), fn_.at(j), 0};
  c.tn = examples_ - c.tp - c.fp - c.fn;
  return c;
}

LabelCounts ConfusionCounts::totals() const {
  LabelCounts c;
  for (std::size_t j = 0; j < tp_.size(); ++j) {
    c.tp += tp_[j];
    c.fp += fp_[j];
    c.fn += fn_[j];
  }
  c.tn = examples_ * tp_.size() - c.tp - c.fp - c.fn;
  return c;
}

LinearFractional metric_form(const MetricSpec& spec, double prior) {
  const double p = prior;
  switch (spec.kind) {
    case MetricKind::hamming:
      return {1.0, -1.0, -1.0, 1.0, 0.0, 0.0};
    case MetricKind::f_beta: {
      if (!(spec.beta > 0.0)) throw Error("F-measure needs beta > 0");
      const double c = 1.0 + spec.beta * spec.beta;
      return {c * p, 0.0, -c, c * p, 1.0, -1.0};
    }
    case MetricKind::jaccard:
      return {p, 0.0, -1.0, p, 1.0, 0.0};
    case MetricKind::am: {
      const double q = 2.0 * p * (1.0 - p);
      return {q, -p, -(1.0 - p), q, 0.0, 0.0};
    }
  }
  throw Error("unknown metric");
}

MetricValue evaluate_generalized(const ConfusionCounts& counts, const MetricSpec& spec, double gamma) {
  MetricValue out;
  out.min_denominator = std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(counts.examples());
  const std::size_t m = counts.num_labels();
  if (counts.examples() == 0 || m == 0) {
    out.defined = false;
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  auto rates = [&](const LabelCounts& c, double scale) {
    struct {
      double fp, fn, prior;
    } r{static_cast<double>(c.fp) / scale, static_cast<double>(c.fn) / scale,
        static_cast<double>(c.tp + c.fn) / scale};
    return r;
  };

  if (spec.averaging == Averaging::micro) {
    const auto r = rates(counts.totals(), n * static_cast<double>(m));
    const LinearFractional psi = metric_form(spec, r.prior);
    const double den = psi.denominator(r.fp, r.fn);
    out.min_denominator = den;
    if (den < gamma) {
      out.defined = false;
      out.value = std::numeric_limits<double>::quiet_NaN();
    } else {
      out.value = psi.numerator(r.fp, r.fn) / den;
    }
    return out;
  }

  double sum = 0.0;
  std::size_t used = 0;
  for (LabelId j = 0; j < m; ++j) {
    const auto r = rates(counts.label(j), n);
    const LinearFractional psi = metric_form(spec, r.prior);
    const double den = psi.denominator(r.fp, r.fn);
    out.min_denominator = std::min(out.min_denominator, den);
    if (den < gamma) {
      ++out.undefined_labels;
      continue;
    }
    sum += psi.numerator(r.fp, r.fn) / den;
    ++used;
  }
  if (used == 0) {
    out.defined = false;
    out.value = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.value = sum / static_cast<double>(used);
  }
  return out;
}

double optimal_threshold(const MetricSpec& spec, double psi_star, double prior) {
  const LinearFractional f = metric_form(spec, prior);
  return (psi_star * f.b1 - f.a1) / (psi_star * (f.b1 + f.b2) - (f.a1 + f.a2));
}

void OfoTuner::observe(double score, bool truth) noexcept {
  const bool predicted = predict(score);
  observe_counts(predicted && truth ? 1 : 0, predicted ? 1 : 0, truth ? 1 : 0);
}

void OfoTuner::observe_counts(std::uint64_t hits, std::uint64_t predicted, std::uint64_t actual) noexcept {
  a_ += hits;
  b_ += predicted + actual;
}

double ofo_tune(std::span<const std::pair<double, int>> stream) {
  OfoTuner t;
  for (const auto& [score, truth] : stream) t.observe(score, truth != 0);
  return t.threshold();
}

}  // namespace plt
