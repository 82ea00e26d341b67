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

#include "plt/model_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "plt/errors.hpp"

namespace plt {
namespace {

static_assert(std::endian::native == std::endian::little, "weights files are little-endian");

constexpr FeatureId kBiasId = 0xFFFFFFFFu;

template <typename T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw ModelFormatError(std::string("weights file truncated in ") + what);
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ModelFormatError(std::string("non-finite ") + what + " in weights file");
  return v;
}

std::map<std::string, std::string> read_meta(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ModelFormatError("cannot open " + p.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string k, v, extra;
    if (!(ls >> k >> v) || (ls >> extra)) throw ModelFormatError("malformed meta line: " + line);
    kv[k] = v;
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& k) {
  auto it = kv.find(k);
  if (it == kv.end()) throw ModelFormatError("meta.txt lacks '" + k + "'");
  return it->second;
}

bool flag(const std::map<std::string, std::string>& kv, const std::string& k) {
  const auto& v = need(kv, k);
  if (v == "0") return false;
  if (v == "1") return true;
  throw ModelFormatError("meta.txt: '" + k + "' must be 0 or 1");
}

}  // namespace

void write_weights(const PLTModel& model, std::ostream& out, bool checkpoint) {
  for (const auto& m : model.models) {
    const auto params = m.sorted_params();
    put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size() + 1));
    for (const auto& [f, p] : params) {
      put<std::uint32_t>(out, f);
      put<double>(out, p.weight);
    }
    put<std::uint32_t>(out, kBiasId);
    put<double>(out, m.bias().weight);
    if (checkpoint) {
      for (const auto& [f, p] : params) put<double>(out, p.accum);
      put<double>(out, m.bias().accum);
      put<std::uint64_t>(out, m.update_count());
    }
  }
}

void read_weights(PLTModel& model, std::istream& in, bool checkpoint) {
  model.models.assign(model.tree.size(), NodeModel(model.loss));
  std::vector<std::pair<FeatureId, double>> entries;
  for (auto& m : model.models) {
    const auto count = get<std::uint32_t>(in, "node header");
    if (count == 0) throw ModelFormatError("node record without a bias entry");
    entries.clear();
    for (std::uint32_t i = 0; i < count; ++i) {
      const auto f = get<std::uint32_t>(in, "feature id");
      const double w = finite(get<double>(in, "weight"), "weight");
      if (!entries.empty() && f <= entries.back().first)
        throw ModelFormatError("feature ids not strictly increasing");
      entries.emplace_back(f, w);
    }
    if (entries.back().first != kBiasId) throw ModelFormatError("node record lacks the bias entry");
    std::vector<double> acc(count, 0.0);
    if (checkpoint) {
      for (auto& a : acc) {
        a = finite(get<double>(in, "accumulator"), "accumulator");
        if (a < 0.0) throw ModelFormatError("negative accumulator");
      }
      m.set_update_count(get<std::uint64_t>(in, "update counter"));
    }
    for (std::uint32_t i = 0; i + 1 < count; ++i)
      m.set_param(entries[i].first, {entries[i].second, acc[i]});
    m.set_bias({entries.back().second, acc.back()});
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ModelFormatError("trailing bytes in weights file");
}

void save_model(const PLTModel& model, const std::filesystem::path& dir, const SaveOptions& opts) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "tree.txt");
    write_tree(model.tree, out);
    if (!out) throw Error("failed writing " + (dir / "tree.txt").string());
  }
  {
    std::ofstream out(dir / "weights.bin", std::ios::binary);
    write_weights(model, out, opts.checkpoint);
    if (!out) throw Error("failed writing " + (dir / "weights.bin").string());
  }
  std::ofstream out(dir / "meta.txt");
  out << "version " << kModelFormatVersion << '\n'
      << "loss " << to_string(model.loss) << '\n'
      << "normalize " << (model.normalize_siblings ? 1 : 0) << '\n'
      << "feature_normalize " << (opts.feature_normalize ? 1 : 0) << '\n'
      << "checkpoint " << (opts.checkpoint ? 1 : 0) << '\n'
      << "nodes " << model.tree.size() << '\n';
  if (!out) throw Error("failed writing " + (dir / "meta.txt").string());
}

LoadedModel load_model_dir(const std::filesystem::path& dir) {
  const auto kv = read_meta(dir / "meta.txt");
  if (need(kv, "version") != std::to_string(kModelFormatVersion))
    throw ModelFormatError("unsupported model version " + need(kv, "version"));
  LoadedModel out;
  try {
    out.model.loss = parse_loss(need(kv, "loss"));
  } catch (const Error& e) {
    throw ModelFormatError(e.what());
  }
  out.model.normalize_siblings = flag(kv, "normalize");
  out.feature_normalize = flag(kv, "feature_normalize");
  out.checkpoint = flag(kv, "checkpoint");

  std::ifstream tin(dir / "tree.txt");
  if (!tin) throw ModelFormatError("cannot open " + (dir / "tree.txt").string());
  try {
    out.model.tree = read_tree(tin);
  } catch (const ModelFormatError&) {
    throw;
  } catch (const Error& e) {
    throw ModelFormatError(std::string("tree.txt: ") + e.what());
  }
  if (need(kv, "nodes") != std::to_string(out.model.tree.size()))
    throw ModelFormatError("node count in meta.txt does not match tree.txt");

  std::ifstream win(dir / "weights.bin", std::ios::binary);
  if (!win) throw ModelFormatError("cannot open " + (dir / "weights.bin").string());
  read_weights(out.model, win, out.checkpoint);
  return out;
}

PLTModel load_model(const std::filesystem::path& dir) { return load_model_dir(dir).model; }

}  // namespace plt
