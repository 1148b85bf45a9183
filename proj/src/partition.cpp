#include "kpool/partition.hpp"

#include <map>
#include <utility>

namespace kpool {

Partition::Partition(const std::vector<std::size_t>& labels) : labels_(labels.size()) {
  std::map<std::size_t, std::size_t> renumber;
  for (std::size_t s = 0; s < labels.size(); ++s) {
    auto [it, fresh] = renumber.try_emplace(labels[s], renumber.size());
    if (fresh) blocks_.emplace_back(labels.size());
    labels_[s] = it->second;
    blocks_[it->second].insert(s);
  }
}

Partition Partition::discrete(std::size_t n) {
  std::vector<std::size_t> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = i;
  return Partition(l);
}

Partition Partition::trivial(std::size_t n) { return Partition(std::vector<std::size_t>(n, 0)); }

Partition Partition::meet(const Partition& o) const {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  std::vector<std::size_t> l(labels_.size());
  for (std::size_t s = 0; s < labels_.size(); ++s)
    l[s] = ids.try_emplace({labels_[s], o.labels_[s]}, ids.size()).first->second;
  return Partition(l);
}

bool Partition::refines(const Partition& coarser) const {
  for (const auto& b : blocks_) {
    auto first = b.first();
    if (first && !b.is_subset_of(coarser.cell(*first))) return false;
  }
  return true;
}

}  // namespace kpool
