// Dense sets of states over a fixed universe [0, n).
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace kpool {

using StateId = std::size_t;

class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  static StateSet full(std::size_t universe) {
    StateSet s(universe);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    return s;
  }
  static StateSet singleton(std::size_t universe, StateId x) {
    StateSet s(universe);
    s.insert(x);
    return s;
  }

  std::size_t universe() const { return universe_; }

  bool contains(StateId x) const {
    return x < universe_ && ((words_[x / 64] >> (x % 64)) & 1u) != 0;
  }
  void insert(StateId x) { words_[x / 64] |= std::uint64_t{1} << (x % 64); }
  void erase(StateId x) { words_[x / 64] &= ~(std::uint64_t{1} << (x % 64)); }

  bool empty() const {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool is_subset_of(const StateSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    return true;
  }
  bool intersects(const StateSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & o.words_[i]) != 0) return true;
    return false;
  }

  StateSet& operator&=(const StateSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  StateSet& operator|=(const StateSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  StateSet& operator-=(const StateSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
  friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

  StateSet complement() const {
    StateSet s(*this);
    for (auto& w : s.words_) w = ~w;
    s.trim();
    return s;
  }

  friend bool operator==(const StateSet&, const StateSet&) = default;

  std::optional<StateId> first() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] != 0) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
    return std::nullopt;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<StateId> members() const {
    std::vector<StateId> out;
    out.reserve(count());
    for_each([&](StateId x) { out.push_back(x); });
    return out;
  }

  std::size_t hash() const {
    std::size_t h = universe_;
    for (auto w : words_) h = h * 1099511628211ull ^ std::hash<std::uint64_t>{}(w);
    return h;
  }

 private:
  void trim() {
    if (universe_ % 64 != 0 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
  }

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace kpool
