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
#include <utility>
#include <vector>

namespace plt {

/// Open-addressing hash map from 32-bit keys using Robin Hood probing and
/// backward-shift deletion. Capacity is a power of two; the table grows
/// once the load factor would exceed 0.9.
template <typename Value>
class RobinHoodMap {
  struct Slot {
    std::uint32_t key = 0;
    std::uint32_t dist = 0;  // probe distance + 1; 0 marks an empty slot
    Value value{};
  };

 public:
  using key_type = std::uint32_t;

  class const_iterator {
   public:
    const_iterator(const Slot* cur, const Slot* end) : cur_(cur), end_(end) { skip(); }
    std::pair<std::uint32_t, const Value&> operator*() const { return {cur_->key, cur_->value}; }
    const_iterator& operator++() {
      ++cur_;
      skip();
      return *this;
    }
    bool operator==(const const_iterator& o) const { return cur_ == o.cur_; }

   private:
    void skip() {
      while (cur_ != end_ && cur_->dist == 0) ++cur_;
    }
    const Slot* cur_;
    const Slot* end_;
  };

  RobinHoodMap() = default;

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::size_t capacity() const noexcept { return slots_.size(); }

  const_iterator begin() const { return {slots_.data(), slots_.data() + slots_.size()}; }
  const_iterator end() const {
    return {slots_.data() + slots_.size(), slots_.data() + slots_.size()};
  }

  const Value* find(std::uint32_t key) const noexcept {
    if (slots_.empty()) return nullptr;
    std::size_t i = home(key);
    for (std::uint32_t d = 1;; ++d, i = (i + 1) & mask_) {
      const Slot& s = slots_[i];
      if (s.dist < d) return nullptr;  // empty, or a richer resident: key absent
      if (s.key == key) return &s.value;
    }
  }
  Value* find(std::uint32_t key) noexcept {
    return const_cast<Value*>(std::as_const(*this).find(key));
  }

  bool contains(std::uint32_t key) const noexcept { return find(key) != nullptr; }

  /// Value for key, value-initialized on first access.
  Value& operator[](std::uint32_t key) {
    if (Value* v = find(key)) return *v;
    if ((size_ + 1) * 10 > slots_.size() * 9) grow();
    return *insert_new(key, Value{});
  }

  bool erase(std::uint32_t key) noexcept {
    if (slots_.empty()) return false;
    std::size_t i = home(key);
    for (std::uint32_t d = 1;; ++d, i = (i + 1) & mask_) {
      Slot& s = slots_[i];
      if (s.dist < d) return false;
      if (s.key == key) break;
    }
    // Shift the following cluster back by one until an empty slot or a slot
    // already at its home position.
    std::size_t next = (i + 1) & mask_;
    while (slots_[next].dist > 1) {
      slots_[i] = std::move(slots_[next]);
      --slots_[i].dist;
      i = next;
      next = (next + 1) & mask_;
    }
    slots_[i] = Slot{};
    --size_;
    return true;
  }

  /// Removes every entry for which pred(key, value) holds.
  template <typename Pred>
  void erase_if(Pred pred) {
    std::vector<std::uint32_t> doomed;
    for (const Slot& s : slots_)
      if (s.dist != 0 && pred(s.key, s.value)) doomed.push_back(s.key);
    for (std::uint32_t k : doomed) erase(k);
  }

  template <typename Fn>
  void for_each_mut(Fn fn) {
    for (Slot& s : slots_)
      if (s.dist != 0) fn(s.key, s.value);
  }

  void clear() noexcept {
    slots_.clear();
    mask_ = 0;
    size_ = 0;
  }

  void reserve(std::size_t n) {
    std::size_t want = 8;
    while (n * 10 > want * 9) want <<= 1;
    if (want > slots_.size()) rehash(want);
  }

 private:
  std::size_t home(std::uint32_t key) const noexcept {
    // Fibonacci hashing; the table size is a power of two.
    return static_cast<std::size_t>((static_cast<std::uint64_t>(key) * 0x9E3779B97F4A7C15ULL) >> 32) &
           mask_;
  }

  Value* insert_new(std::uint32_t key, Value value) {
    Slot carry{key, 1, std::move(value)};
    Value* placed = nullptr;
    std::size_t i = home(key);
    for (;; i = (i + 1) & mask_) {
      Slot& s = slots_[i];
      if (s.dist == 0) {
        s = std::move(carry);
        ++size_;
        return placed ? placed : &s.value;
      }
      if (s.dist < carry.dist) {
        std::swap(s, carry);
        if (!placed) placed = &s.value;
      }
      ++carry.dist;
    }
  }

  void grow() { rehash(slots_.empty() ? 8 : slots_.size() * 2); }

  void rehash(std::size_t new_capacity) {
    std::vector<Slot> old = std::move(slots_);
    slots_.assign(new_capacity, Slot{});
    mask_ = new_capacity - 1;
    size_ = 0;
    for (Slot& s : old)
      if (s.dist != 0) insert_new(s.key, std::move(s.value));
  }

  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace plt
