#include <algorithm>
#include <numeric>

#include "mmjoin/joinproject.hpp"

namespace mmjoin {

void OutputSet::canonicalize() {
  std::size_t n = size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto key = [this](std::size_t i) { return tuple(i); };
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    auto a = key(x), b = key(y);
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });

  std::vector<ValueId> ids;
  std::vector<std::uint64_t> counts;
  ids.reserve(ids_.size());
  for (std::size_t i : order) {
    auto t = key(i);
    bool dup = !ids.empty() && std::equal(t.begin(), t.end(), ids.end() - arity_);
    if (dup) {
      if (has_counts_) counts.back() += counts_[i];
      continue;
    }
    ids.insert(ids.end(), t.begin(), t.end());
    if (has_counts_) counts.push_back(counts_[i]);
  }
  ids_ = std::move(ids);
  counts_ = std::move(counts);
}

bool OutputSet::contains(std::span<const ValueId> t) const {
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto m = tuple(mid);
    if (std::lexicographical_compare(m.begin(), m.end(), t.begin(), t.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < size() && std::equal(t.begin(), t.end(), tuple(lo).begin());
}

std::vector<std::uint64_t> OutputSet::packed_pairs() const {
  std::vector<std::uint64_t> out;
  out.reserve(size());
  for (std::size_t i = 0; i + 1 < ids_.size(); i += 2) {
    out.push_back(std::uint64_t{ids_[i]} << 32 | ids_[i + 1]);
  }
  return out;
}

std::uint64_t OutputSet::total_count() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

}  // namespace mmjoin
