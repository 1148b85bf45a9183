#pragma once

#include <cstddef>
#include <vector>

#include "kpool/state_set.hpp"

namespace kpool {

/// A partition of [0, n) into disjoint blocks. Block labels are normalized to
/// first-occurrence order, so two partitions are equal iff their labels are.
/// Agent relations are stored this way, which makes reflexivity, symmetry and
/// transitivity structural.
class Partition {
 public:
  Partition() = default;
  /// Any labelling; blocks are the label classes.
  explicit Partition(const std::vector<std::size_t>& labels);

  static Partition discrete(std::size_t n);
  static Partition trivial(std::size_t n);

  std::size_t universe() const { return labels_.size(); }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t block_of(StateId s) const { return labels_[s]; }
  const StateSet& block(std::size_t b) const { return blocks_[b]; }
  const StateSet& cell(StateId s) const { return blocks_[labels_[s]]; }
  const std::vector<StateSet>& blocks() const { return blocks_; }
  const std::vector<std::size_t>& labels() const { return labels_; }

  bool same_block(StateId s, StateId u) const { return labels_[s] == labels_[u]; }

  /// Common refinement (intersection of the equivalence relations).
  Partition meet(const Partition& o) const;
  /// True iff every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::size_t> labels_;
  std::vector<StateSet> blocks_;
};

}  // namespace kpool
