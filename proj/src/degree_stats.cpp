#include <algorithm>
#include <numeric>

#include "mmjoin/relation.hpp"

namespace mmjoin {

ColumnStats::ColumnStats(std::span<const std::uint64_t> degrees,
                         std::span<const std::uint64_t> effort) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
  for (std::size_t v = 0; v < degrees.size(); ++v) {
    if (degrees[v] > 0) entries.emplace_back(degrees[v], v < effort.size() ? effort[v] : 0);
  }
  std::sort(entries.begin(), entries.end());

  sorted_degrees_.reserve(entries.size());
  degree_prefix_.assign(entries.size() + 1, 0);
  effort_prefix_.assign(entries.size() + 1, 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    sorted_degrees_.push_back(entries[i].first);
    degree_prefix_[i + 1] = degree_prefix_[i] + entries[i].first;
    effort_prefix_[i + 1] = effort_prefix_[i] + entries[i].second;
  }
}

std::size_t ColumnStats::rank(std::uint64_t delta) const {
  return static_cast<std::size_t>(
      std::upper_bound(sorted_degrees_.begin(), sorted_degrees_.end(), delta) -
      sorted_degrees_.begin());
}

std::uint64_t ColumnStats::count(std::uint64_t delta) const { return rank(delta); }

std::uint64_t ColumnStats::degree_mass(std::uint64_t delta) const {
  return degree_prefix_.empty() ? 0 : degree_prefix_[rank(delta)];
}

std::uint64_t ColumnStats::effort(std::uint64_t delta) const {
  return effort_prefix_.empty() ? 0 : effort_prefix_[rank(delta)];
}

DegreeStats degree_stats(const IndexedRelation& r) {
  const Adjacency& fwd = r.fwd();
  const Adjacency& rev = r.rev();

  std::vector<std::uint64_t> x_deg(fwd.key_space()), x_effort(fwd.key_space());
  for (ValueId a = 0; a < fwd.key_space(); ++a) {
    x_deg[a] = fwd.degree(a);
    for (ValueId b : fwd[a]) x_effort[a] += rev.degree(b);
  }
  std::vector<std::uint64_t> y_deg(rev.key_space()), y_effort(rev.key_space());
  for (ValueId b = 0; b < rev.key_space(); ++b) {
    y_deg[b] = rev.degree(b);
    y_effort[b] = y_deg[b] * y_deg[b];
  }
  return DegreeStats{ColumnStats(x_deg, x_effort), ColumnStats(y_deg, y_effort)};
}

}  // namespace mmjoin
