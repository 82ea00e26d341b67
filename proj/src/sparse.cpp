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

#include "plt/sparse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "plt/errors.hpp"

namespace plt {

SparseVector SparseVector::from_entries(std::vector<FeatureValue> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const FeatureValue& a, const FeatureValue& b) { return a.id < b.id; });
  SparseVector out;
  out.entries_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].id == entries[i - 1].id)
      throw Error("duplicate feature id " + std::to_string(entries[i].id));
    if (!std::isfinite(entries[i].value))
      throw Error("non-finite value for feature " + std::to_string(entries[i].id));
    if (entries[i].value != 0.0) out.entries_.push_back(entries[i]);
  }
  return out;
}

SparseVector SparseVector::from_dense(std::span<const double> values) {
  std::vector<FeatureValue> e;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0.0) e.push_back({static_cast<FeatureId>(i), values[i]});
  return from_entries(std::move(e));
}

double SparseVector::l2_norm() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) s += e.value * e.value;
  return std::sqrt(s);
}

double SparseVector::dot(std::span<const double> dense) const noexcept {
  double s = 0.0;
  for (const auto& e : entries_)
    if (e.id < dense.size()) s += e.value * dense[e.id];
  return s;
}

double SparseVector::dot(const SparseVector& other) const noexcept {
  double s = 0.0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->id < b->id) {
      ++a;
    } else if (b->id < a->id) {
      ++b;
    } else {
      s += a->value * b->value;
      ++a;
      ++b;
    }
  }
  return s;
}

void SparseVector::normalize() {
  const double n = l2_norm();
  if (n == 0.0) return;
  for (auto& e : entries_) e.value /= n;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  return value;
}

Example parse_line(std::string_view text, std::size_t line, const Dataset& bounds) {
  Example ex;
  std::size_t pos = 0;

  // Label field: everything before the first space, unless it looks like a
  // feature (no label field at all).
  std::size_t sp = text.find(' ');
  std::string_view head = text.substr(0, sp);
  if (!head.empty() && head.find(':') == std::string_view::npos) {
    std::size_t start = 0;
    while (start <= head.size()) {
      std::size_t comma = head.find(',', start);
      if (comma == std::string_view::npos) comma = head.size();
      auto label = parse_number<std::uint64_t>(head.substr(start, comma - start), line, "label");
      if (label >= bounds.num_labels)
        throw RangeError("line " + std::to_string(line) + ": label " + std::to_string(label) +
                         " >= declared label count " + std::to_string(bounds.num_labels));
      ex.labels.push_back(static_cast<LabelId>(label));
      start = comma + 1;
    }
    pos = (sp == std::string_view::npos) ? text.size() : sp;
  }

  std::vector<FeatureValue> feats;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
    std::string_view tok = text.substr(pos, end - pos);
    std::size_t colon = tok.find(':');
    if (colon == std::string_view::npos)
      throw ParseError(line, "feature '" + std::string(tok) + "' is not id:value");
    auto id = parse_number<std::uint64_t>(tok.substr(0, colon), line, "feature id");
    auto value = parse_number<double>(tok.substr(colon + 1), line, "feature value");
    if (id >= bounds.num_features)
      throw RangeError("line " + std::to_string(line) + ": feature " + std::to_string(id) +
                       " >= declared feature count " + std::to_string(bounds.num_features));
    if (!std::isfinite(value)) throw ParseError(line, "non-finite feature value");
    feats.push_back({static_cast<FeatureId>(id), value});
    pos = end;
  }

  std::sort(ex.labels.begin(), ex.labels.end());
  if (std::adjacent_find(ex.labels.begin(), ex.labels.end()) != ex.labels.end())
    throw ParseError(line, "duplicate label");
  try {
    ex.features = SparseVector::from_entries(std::move(feats));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
  return ex;
}

}  // namespace

Dataset parse_dataset(std::istream& in) {
  std::string buf;
  if (!std::getline(in, buf)) throw ParseError(1, "missing header");
  Dataset data;
  std::size_t declared = 0;
  {
    std::string_view h = trim(buf);
    std::size_t values[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
      while (pos < h.size() && h[pos] == ' ') ++pos;
      std::size_t end = h.find(' ', pos);
      if (end == std::string_view::npos) end = h.size();
      values[i] = parse_number<std::size_t>(h.substr(pos, end - pos), 1, "header field");
      pos = end;
    }
    if (!trim(h.substr(pos)).empty())
      throw ParseError(1, "header must be 'N num_features num_labels'");
    declared = values[0];
    data.num_features = values[1];
    data.num_labels = values[2];
  }

  data.examples.reserve(declared);
  std::size_t line = 1;
  while (std::getline(in, buf)) {
    ++line;
    if (data.examples.size() == declared) {
      if (trim(buf).empty()) continue;
      throw ParseError(line, "more example lines than the declared " + std::to_string(declared));
    }
    data.examples.push_back(parse_line(trim(buf), line, data));
  }
  if (data.examples.size() != declared)
    throw ParseError(line, "header declares " + std::to_string(declared) + " examples, found " +
                               std::to_string(data.examples.size()));
  return data;
}

void serialize_dataset(const Dataset& data, std::ostream& out) {
  out << data.size() << ' ' << data.num_features << ' ' << data.num_labels << '\n';
  char buf[64];
  std::string line;
  for (const auto& ex : data.examples) {
    line.clear();
    for (std::size_t i = 0; i < ex.labels.size(); ++i) {
      if (i) line += ',';
      line += std::to_string(ex.labels[i]);
    }
    for (const auto& f : ex.features) {
      line += ' ';
      line += std::to_string(f.id);
      line += ':';
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, f.value);
      line.append(buf, ptr);
    }
    out << line << '\n';
  }
}

void l2_normalize(Dataset& data) {
  for (auto& ex : data.examples) ex.features.normalize();
}

std::vector<std::size_t> label_frequencies(const Dataset& data) {
  std::vector<std::size_t> freq(data.num_labels, 0);
  for (const auto& ex : data.examples)
    for (LabelId l : ex.labels) ++freq[l];
  return freq;
}

}  // namespace plt
