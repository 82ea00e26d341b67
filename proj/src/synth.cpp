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

#include "plt/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "plt/errors.hpp"

namespace plt {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> softmax_scores(const SynthModel& model, std::span<const double> x) {
  std::vector<double> s(model.m);
  for (std::size_t j = 0; j < model.m; ++j) s[j] = dot(model.w[j], x);
  const double top = *std::max_element(s.begin(), s.end());
  double z = 0.0;
  for (double& v : s) z += (v = std::exp(v - top));
  for (double& v : s) v /= z;
  return s;
}

// One draw of the dependent model's label vector.
void draw_dependent(const SynthModel& model, std::span<const double> x, Rng& rng,
                    std::vector<double>& latent, std::vector<char>& y) {
  std::normal_distribution<double> noise(0.0, model.noise_sd);
  for (std::size_t k = 0; k < model.m; ++k) latent[k] = dot(model.w[k], x) + noise(rng);
  for (std::size_t j = 0; j < model.m; ++j) y[j] = dot(model.mixing[j], latent) > 0.0;
}

}  // namespace

std::vector<double> sample_unit_sphere(std::size_t d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(d);
  double norm = 0.0;
  do {
    for (double& c : v) c = g(rng);
    norm = std::sqrt(dot(v, v));
  } while (norm == 0.0);
  for (double& c : v) c /= norm;
  return v;
}

std::vector<double> sample_unit_ball(std::size_t d, Rng& rng) {
  std::vector<double> v = sample_unit_sphere(d, rng);
  const double r = std::pow(std::uniform_real_distribution<double>(0.0, 1.0)(rng),
                            1.0 / static_cast<double>(d));
  for (double& c : v) c *= r;
  return v;
}

std::vector<double> SynthModel::marginals(std::span<const double> x, std::uint64_t oracle_seed) const {
  switch (kind) {
    case SynthKind::multiclass:
      return softmax_scores(*this, x);
    case SynthKind::independent: {
      std::vector<double> eta(m);
      for (std::size_t j = 0; j < m; ++j) eta[j] = 1.0 / (1.0 + std::exp(-dot(w[j], x)));
      return eta;
    }
    case SynthKind::dependent: {
      Rng rng(oracle_seed);
      std::vector<double> eta(m, 0.0), latent(m);
      std::vector<char> y(m);
      for (std::size_t s = 0; s < oracle_samples; ++s) {
        draw_dependent(*this, x, rng, latent, y);
        for (std::size_t j = 0; j < m; ++j) eta[j] += y[j];
      }
      for (double& e : eta) e /= static_cast<double>(oracle_samples);
      return eta;
    }
  }
  throw Error("unknown synthetic kind");
}

std::vector<LabelId> SynthModel::sample_labels(std::span<const double> x, Rng& rng) const {
  std::vector<LabelId> labels;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (kind) {
    case SynthKind::multiclass: {
      const auto p = softmax_scores(*this, x);
      double r = unif(rng);
      LabelId j = 0;
      for (; j + 1 < m; ++j) {
        if (r < p[j]) break;
        r -= p[j];
      }
      labels.push_back(j);
      break;
    }
    case SynthKind::independent: {
      for (std::size_t j = 0; j < m; ++j) {
        const double eta = 1.0 / (1.0 + std::exp(-dot(w[j], x)));
        if (unif(rng) < eta) labels.push_back(static_cast<LabelId>(j));
      }
      break;
    }
    case SynthKind::dependent: {
      std::vector<double> latent(m);
      std::vector<char> y(m);
      draw_dependent(*this, x, rng, latent, y);
      for (std::size_t j = 0; j < m; ++j)
        if (y[j]) labels.push_back(static_cast<LabelId>(j));
      break;
    }
  }
  return labels;
}

SynthModel make_synth_model(const SynthConfig& cfg) {
  if (cfg.d == 0 || cfg.m == 0) throw Error("synthetic data needs d, m >= 1");
  SynthModel model;
  model.kind = cfg.kind;
  model.d = cfg.d;
  model.m = cfg.m;
  model.noise_sd = cfg.noise_sd;
  model.oracle_samples = cfg.oracle_samples;
  Rng rng(derive_seed(cfg.seed, 0));
  for (std::size_t j = 0; j < cfg.m; ++j) model.w.push_back(sample_unit_sphere(cfg.d, rng));
  if (cfg.kind == SynthKind::dependent) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    model.mixing.assign(cfg.m, std::vector<double>(cfg.m));
    for (auto& row : model.mixing)
      for (double& v : row) v = u(rng);
  }
  return model;
}

SynthData sample_synth(const SynthModel& model, std::size_t n, std::uint64_t seed) {
  SynthData out;
  out.model = model;
  out.dataset.num_features = model.d;
  out.dataset.num_labels = model.m;
  out.dataset.examples.reserve(n);
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    std::vector<double> x = sample_unit_ball(model.d, rng);
    Example ex{SparseVector::from_dense(x), model.sample_labels(x, rng)};
    out.dataset.examples.push_back(std::move(ex));
    out.points.push_back(std::move(x));
  }
  return out;
}

SynthData generate_synth(const SynthConfig& cfg) {
  if (cfg.n == 0) throw Error("synthetic data needs n >= 1");
  return sample_synth(make_synth_model(cfg), cfg.n, derive_seed(cfg.seed, 1));
}

SynthData gen_multiclass(SynthConfig cfg) {
  cfg.kind = SynthKind::multiclass;
  return generate_synth(cfg);
}

SynthData gen_independent(SynthConfig cfg) {
  cfg.kind = SynthKind::independent;
  return generate_synth(cfg);
}

SynthData gen_dependent(SynthConfig cfg) {
  cfg.kind = SynthKind::dependent;
  return generate_synth(cfg);
}

std::pair<Dataset, Dataset> split_half(const Dataset& data) {
  Dataset a{{}, data.num_features, data.num_labels};
  Dataset b = a;
  const std::size_t half = (data.size() + 1) / 2;
  a.examples.assign(data.examples.begin(), data.examples.begin() + static_cast<std::ptrdiff_t>(half));
  b.examples.assign(data.examples.begin() + static_cast<std::ptrdiff_t>(half), data.examples.end());
  return {std::move(a), std::move(b)};
}

void LabelDistribution::validate(double tol) const {
  if (m > 64) throw Error("label distribution supports at most 64 labels");
  double total = 0.0;
  for (const auto& [mask, p] : atoms) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error("negative or non-finite probability");
    if (m < 64 && (mask >> m) != 0) throw Error("label vector has bits beyond m");
    total += p;
  }
  if (std::abs(total - 1.0) > tol)
    throw Error("probabilities sum to " + std::to_string(total) + ", not 1");
}

std::vector<double> LabelDistribution::marginals() const {
  std::vector<double> eta(m, 0.0);
  for (const auto& [mask, p] : atoms)
    for (std::size_t j = 0; j < m; ++j)
      if ((mask >> j) & 1U) eta[j] += p;
  return eta;
}

double LabelDistribution::any_of(std::uint64_t mask) const {
  double s = 0.0;
  for (const auto& [y, p] : atoms)
    if (y & mask) s += p;
  return s;
}

double LabelDistribution::expected_precision(std::span<const LabelId> labels) const {
  if (labels.empty()) return 0.0;
  std::uint64_t pick = 0;
  for (LabelId l : labels) pick |= std::uint64_t{1} << l;
  double s = 0.0;
  for (const auto& [y, p] : atoms) s += p * std::popcount(y & pick);
  return s / static_cast<double>(labels.size());
}

LabelDistribution LabelDistribution::independent(std::span<const double> eta) {
  LabelDistribution d;
  d.m = eta.size();
  if (d.m > 20) throw Error("independent(): too many labels to enumerate");
  const std::uint64_t total = std::uint64_t{1} << d.m;
  d.atoms.reserve(total);
  for (std::uint64_t y = 0; y < total; ++y) {
    double p = 1.0;
    for (std::size_t j = 0; j < d.m; ++j) p *= ((y >> j) & 1U) ? eta[j] : 1.0 - eta[j];
    d.atoms.emplace_back(y, p);
  }
  return d;
}

std::vector<double> node_conditionals(const LabelDistribution& dist, const LabelTree& tree) {
  std::vector<std::uint64_t> below(tree.size(), 0);
  for (NodeId v = 0; v < tree.size(); ++v) {
    const TreeNode& n = tree.node(v);
    if (!n.has_label()) continue;
    for (NodeId u = v; u != kNoNode; u = tree.node(u).parent) below[u] |= std::uint64_t{1} << n.label;
  }
  std::vector<double> z(tree.size());
  for (NodeId v = 0; v < tree.size(); ++v) z[v] = dist.any_of(below[v]);
  std::vector<double> cond(tree.size());
  for (NodeId v = 0; v < tree.size(); ++v) {
    const NodeId pa = tree.node(v).parent;
    const double parent = pa == kNoNode ? 1.0 : z[pa];
    cond[v] = parent > 0.0 ? z[v] / parent : 0.0;
  }
  return cond;
}

}  // namespace plt
