#include <algorithm>

#include "mmjoin/joinproject.hpp"

namespace mmjoin {

const char* to_string(DedupStrategy s) {
  switch (s) {
    case DedupStrategy::VectorReuse:
      return "vector-reuse";
    case DedupStrategy::SortBased:
      return "sort-based";
    default:
      return "auto";
  }
}

Deduplicator::Deduplicator(std::size_t z_space, DedupStrategy strategy, std::size_t cache_entries)
    : strategy_(strategy) {
  if (strategy_ == DedupStrategy::Auto) {
    strategy_ = z_space <= cache_entries ? DedupStrategy::VectorReuse : DedupStrategy::SortBased;
  }
  if (strategy_ == DedupStrategy::VectorReuse) counter_.assign(z_space, 0);
}

void Deduplicator::add(std::span<const ValueId> zs) {
  appended_ += zs.size();
  if (strategy_ == DedupStrategy::SortBased) {
    buffer_.insert(buffer_.end(), zs.begin(), zs.end());
    return;
  }
  for (ValueId z : zs) {
    if (counter_[z]++ == 0) touched_.push_back(z);
  }
}

void Deduplicator::add(ValueId z, std::uint64_t count) {
  if (count == 0) return;
  if (strategy_ == DedupStrategy::SortBased) {
    weighted_.emplace_back(z, count);
    return;
  }
  if (counter_[z] == 0) touched_.push_back(z);
  counter_[z] += count;
}

void Deduplicator::finish(std::vector<ValueId>& zs, std::vector<std::uint64_t>& counts) {
  zs.clear();
  counts.clear();
  if (strategy_ == DedupStrategy::VectorReuse) {
    // Dense results are cheaper to collect by a scan than by sorting.
    if (touched_.size() * 16 > counter_.size()) {
      for (ValueId z = 0; z < counter_.size(); ++z) {
        if (counter_[z] == 0) continue;
        zs.push_back(z);
        counts.push_back(counter_[z]);
        counter_[z] = 0;
      }
    } else {
      std::sort(touched_.begin(), touched_.end());
      for (ValueId z : touched_) {
        zs.push_back(z);
        counts.push_back(counter_[z]);
        counter_[z] = 0;
      }
    }
    touched_.clear();
    return;
  }

  std::sort(buffer_.begin(), buffer_.end());
  std::sort(weighted_.begin(), weighted_.end());
  std::size_t i = 0, w = 0;
  while (i < buffer_.size() || w < weighted_.size()) {
    ValueId z = i < buffer_.size() ? buffer_[i] : weighted_[w].first;
    if (w < weighted_.size()) z = std::min(z, weighted_[w].first);
    std::uint64_t c = 0;
    while (i < buffer_.size() && buffer_[i] == z) {
      ++c;
      ++i;
    }
    while (w < weighted_.size() && weighted_[w].first == z) c += weighted_[w++].second;
    zs.push_back(z);
    counts.push_back(c);
  }
  buffer_.clear();
  weighted_.clear();
}

std::vector<ValueId> dedup_light(std::span<const ValueId> ys, const Adjacency& s_rev,
                                 DedupStrategy strategy, std::size_t cache_entries) {
  std::size_t z_space = 0;
  for (ValueId b : ys) {
    for (ValueId z : s_rev[b]) z_space = std::max<std::size_t>(z_space, std::size_t{z} + 1);
  }
  Deduplicator dedup(z_space, strategy, cache_entries);
  for (ValueId b : ys) dedup.add(s_rev[b]);
  std::vector<ValueId> zs;
  std::vector<std::uint64_t> counts;
  dedup.finish(zs, counts);
  return zs;
}

}  // namespace mmjoin
