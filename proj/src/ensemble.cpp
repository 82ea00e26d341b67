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

#include "plt/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>

#include "plt/errors.hpp"
#include "plt/random.hpp"

namespace plt {
namespace {

std::filesystem::path member_dir(const std::filesystem::path& dir, std::size_t i) {
  return dir / ("member-" + std::to_string(i));
}

}  // namespace

TopKResult ensemble_predict_top_k(const Ensemble& ens, const SparseVector& x, std::size_t k,
                                  MissingScore missing) {
  if (ens.members.empty()) throw Error("empty ensemble");
  std::vector<TopKResult> lists;
  lists.reserve(ens.members.size());
  std::vector<LabelId> candidates;
  for (const auto& m : ens.members) {
    lists.push_back(predict_top_k(m, x, k));
    for (const auto& s : lists.back()) candidates.push_back(s.label);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  TopKResult out;
  out.reserve(candidates.size());
  for (LabelId l : candidates) {
    // running mean: identical member scores average to themselves exactly
    double mean = 0.0;
    for (std::size_t i = 0; i < lists.size(); ++i) {
      double s = 0.0;
      auto it = std::find_if(lists[i].begin(), lists[i].end(),
                             [l](const ScoredLabel& e) { return e.label == l; });
      if (it != lists[i].end())
        s = it->score;
      else if (missing == MissingScore::path)
        s = estimate_label_prob(ens.members[i], x, l);
      mean += (s - mean) / static_cast<double>(i + 1);
    }
    out.push_back({l, mean});
  }
  std::stable_sort(out.begin(), out.end(), [](const ScoredLabel& a, const ScoredLabel& b) {
    return a.score > b.score || (a.score == b.score && a.label < b.label);
  });
  if (out.size() > k) out.resize(k);
  return out;
}

Ensemble train_ensemble(const Dataset& data, std::size_t members, const TreeConfig& tree_cfg,
                        const TrainConfig& cfg, LossKind loss, unsigned threads) {
  if (members == 0) throw RangeError("ensemble needs at least one member");
  Ensemble ens;
  ens.members.resize(members);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < members; i = next++) {
      try {
        TreeConfig tc = tree_cfg;
        tc.seed = derive_seed(tree_cfg.seed, i);
        ens.members[i] = train(build_tree(data, tc), data, cfg, loss);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(members)));
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);
  return ens;
}

void save_ensemble(const Ensemble& ens, const std::filesystem::path& dir, const SaveOptions& opts) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < ens.members.size(); ++i) save_model(ens.members[i], member_dir(dir, i), opts);
  std::ofstream out(dir / "ensemble.txt");
  out << "members " << ens.members.size() << '\n';
  if (!out) throw Error("failed writing " + (dir / "ensemble.txt").string());
}

bool is_ensemble_dir(const std::filesystem::path& dir) {
  return std::filesystem::exists(dir / "ensemble.txt");
}

Ensemble load_ensemble(const std::filesystem::path& dir) {
  std::ifstream in(dir / "ensemble.txt");
  std::string key;
  std::size_t n = 0;
  if (!in || !(in >> key >> n) || key != "members" || n == 0)
    throw ModelFormatError("malformed ensemble.txt in " + dir.string());
  Ensemble ens;
  for (std::size_t i = 0; i < n; ++i) ens.members.push_back(load_model(member_dir(dir, i)));
  return ens;
}

}  // namespace plt
