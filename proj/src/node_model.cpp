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

#include "plt/node_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "plt/errors.hpp"

namespace plt {

std::string_view to_string(LossKind loss) {
  return loss == LossKind::logistic ? "logistic" : "squared_hinge";
}

LossKind parse_loss(std::string_view name) {
  if (name == "logistic" || name == "log") return LossKind::logistic;
  if (name == "squared_hinge" || name == "squared-hinge" || name == "s.h.")
    return LossKind::squared_hinge;
  throw Error("unknown loss '" + std::string(name) + "'");
}

namespace {

constexpr double kProbFloor = std::numeric_limits<double>::min();
constexpr double kProbCeil = 1.0 - std::numeric_limits<double>::epsilon() / 2;

double sigmoid(double f) noexcept { return 1.0 / (1.0 + std::exp(-f)); }

}  // namespace

double inverse_link(LossKind loss, double score) noexcept {
  if (loss == LossKind::logistic) return std::clamp(sigmoid(score), kProbFloor, kProbCeil);
  return std::clamp((score + 1.0) / 2.0, 0.0, 1.0);
}

double link(LossKind loss, double prob) noexcept {
  if (loss == LossKind::logistic) return std::log(prob / (1.0 - prob));
  return 2.0 * prob - 1.0;
}

double loss_value(LossKind loss, double score, int target) noexcept {
  const double y = target ? 1.0 : -1.0;
  const double margin = y * score;
  if (loss == LossKind::logistic) {
    // log(1 + exp(-margin)) without overflow
    return margin > 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
  }
  const double h = std::max(0.0, 1.0 - margin);
  return h * h;
}

double loss_derivative(LossKind loss, double score, int target) noexcept {
  const double y = target ? 1.0 : -1.0;
  if (loss == LossKind::logistic) return -y * sigmoid(-y * score);
  return -2.0 * y * std::max(0.0, 1.0 - y * score);
}

double NodeModel::score(const SparseVector& x) const noexcept {
  double s = 0.0;
  for (const auto& e : x)
    if (const Param* p = params_.find(e.id)) s += p->weight * e.value;
  return s + bias_.weight;
}

void NodeModel::update(const SparseVector& x, int target, const TrainConfig& cfg, double weight) {
  const double d = loss_derivative(loss_, score(x), target) * weight;
  if (!std::isfinite(d)) throw TrainingDiverged("non-finite loss derivative");
  ++updates_;
  if (d == 0.0) return;

  const double lr = cfg.learning_rate;
  const double eps = cfg.adagrad_epsilon;
  auto step = [&](Param& p, double g) {
    p.accum += g * g;
    p.weight -= lr / std::sqrt(p.accum + eps) * g;
    if (!std::isfinite(p.weight) || !std::isfinite(p.accum))
      throw TrainingDiverged("non-finite weight after update");
  };
  for (const auto& e : x) step(params_[e.id], d * e.value);
  step(bias_, d);
}

void NodeModel::prune(double threshold) {
  if (threshold <= 0.0) return;
  params_.erase_if([&](std::uint32_t, const Param& p) { return std::abs(p.weight) < threshold; });
}

NodeModel NodeModel::inverse_view() const {
  NodeModel inv = *this;
  // 0.0 - w rather than -w keeps +0.0 from turning into -0.0.
  inv.params_.for_each_mut([](std::uint32_t, Param& p) { p.weight = 0.0 - p.weight; });
  inv.bias_.weight = 0.0 - inv.bias_.weight;
  return inv;
}

double NodeModel::weight(FeatureId f) const noexcept {
  const Param* p = params_.find(f);
  return p ? p->weight : 0.0;
}

double NodeModel::accum(FeatureId f) const noexcept {
  const Param* p = params_.find(f);
  return p ? p->accum : 0.0;
}

std::vector<std::pair<FeatureId, NodeModel::Param>> NodeModel::sorted_params() const {
  std::vector<std::pair<FeatureId, Param>> out;
  out.reserve(params_.size());
  for (auto [k, v] : params_) out.emplace_back(k, v);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::size_t NodeModel::serialized_bytes(bool checkpoint) const noexcept {
  const std::size_t entries = params_.size() + 1;  // + bias
  std::size_t bytes = sizeof(std::uint32_t) + entries * (sizeof(std::uint32_t) + sizeof(double));
  if (checkpoint) bytes += entries * sizeof(double) + sizeof(std::uint64_t);
  return bytes;
}

bool operator==(const NodeModel& a, const NodeModel& b) {
  auto same = [](double x, double y) {
    return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
  };
  auto same_param = [&](const NodeModel::Param& x, const NodeModel::Param& y) {
    return same(x.weight, y.weight) && same(x.accum, y.accum);
  };
  if (a.loss_ != b.loss_ || a.updates_ != b.updates_ || a.params_.size() != b.params_.size() ||
      !same_param(a.bias_, b.bias_))
    return false;
  for (auto [k, v] : a.params_) {
    const NodeModel::Param* o = b.params_.find(k);
    if (!o || !same_param(v, *o)) return false;
  }
  return true;
}

}  // namespace plt
