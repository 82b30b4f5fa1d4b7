#pragma once

// Brute-force reference implementations. They share no code with the
// library beyond plain data types.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "mmjoin/joinproject.hpp"
#include "mmjoin/relation.hpp"

namespace oracle {

using mmjoin::ValueId;
using PairCounts = std::map<std::pair<ValueId, ValueId>, std::uint64_t>;
using Pairs = std::vector<std::pair<ValueId, ValueId>>;

inline Pairs tuples_of(const mmjoin::Relation& r) {
  Pairs out;
  for (const auto& t : r.tuples()) out.emplace_back(t.left, t.right);
  return out;
}

// pi_{x,z}(R(x,y), S(z,y)) by nested loops, with witness counts.
inline PairCounts two_path(const Pairs& r, const Pairs& s) {
  PairCounts out;
  for (const auto& [a, b] : r) {
    for (const auto& [c, d] : s) {
      if (b == d) ++out[{a, c}];
    }
  }
  return out;
}

inline std::uint64_t full_join_size(const Pairs& r, const Pairs& s) {
  std::uint64_t n = 0;
  for (const auto& [a, b] : r) {
    for (const auto& [c, d] : s) n += (b == d);
  }
  return n;
}

// k-way star by nested loops over the y value.
inline std::map<std::vector<ValueId>, std::uint64_t> star(const std::vector<Pairs>& rels) {
  std::map<ValueId, std::vector<std::vector<ValueId>>> by_y;
  std::set<ValueId> ys;
  for (const auto& [a, b] : rels[0]) ys.insert(b);
  std::map<std::vector<ValueId>, std::uint64_t> out;
  for (ValueId y : ys) {
    std::vector<std::vector<ValueId>> lists(rels.size());
    for (std::size_t i = 0; i < rels.size(); ++i) {
      for (const auto& [a, b] : rels[i]) {
        if (b == y) lists[i].push_back(a);
      }
    }
    std::vector<ValueId> cur;
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == lists.size()) {
        ++out[cur];
        return;
      }
      for (ValueId a : lists[i]) {
        cur.push_back(a);
        self(self, i + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
  }
  return out;
}

inline std::vector<std::vector<std::uint64_t>> matmul(const std::vector<std::vector<std::uint64_t>>& a,
                                                      const std::vector<std::vector<std::uint64_t>>& b) {
  std::size_t u = a.size(), v = b.size(), w = v ? b[0].size() : 0;
  std::vector<std::vector<std::uint64_t>> c(u, std::vector<std::uint64_t>(w, 0));
  for (std::size_t i = 0; i < u; ++i)
    for (std::size_t j = 0; j < w; ++j)
      for (std::size_t k = 0; k < v; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline std::size_t overlap(const std::vector<ValueId>& x, const std::vector<ValueId>& y) {
  std::size_t n = 0;
  for (ValueId e : x) n += std::count(y.begin(), y.end(), e);
  return n;
}

// Unordered pairs a < b with overlap >= c, with the overlap.
inline PairCounts ssj(const std::vector<std::vector<ValueId>>& sets, std::uint64_t c) {
  PairCounts out;
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      std::size_t n = overlap(sets[a], sets[b]);
      if (n >= c) out[{static_cast<ValueId>(a), static_cast<ValueId>(b)}] = n;
    }
  }
  return out;
}

// Ordered pairs a != b, a nonempty, with a contained in b.
inline std::set<std::pair<ValueId, ValueId>> scj(const std::vector<std::vector<ValueId>>& sets) {
  std::set<std::pair<ValueId, ValueId>> out;
  for (std::size_t a = 0; a < sets.size(); ++a) {
    if (sets[a].empty()) continue;
    for (std::size_t b = 0; b < sets.size(); ++b) {
      if (a == b) continue;
      bool sub = std::all_of(sets[a].begin(), sets[a].end(), [&](ValueId e) {
        return std::find(sets[b].begin(), sets[b].end(), e) != sets[b].end();
      });
      if (sub) out.emplace(static_cast<ValueId>(a), static_cast<ValueId>(b));
    }
  }
  return out;
}

// Random family of sets with distinct sorted elements.
inline std::vector<std::vector<ValueId>> random_family(std::mt19937_64& rng, std::size_t max_sets,
                                                       std::size_t max_size, std::size_t universe) {
  std::size_t m = 1 + rng() % max_sets;
  std::vector<std::vector<ValueId>> sets(m);
  for (auto& s : sets) {
    std::size_t n = 1 + rng() % max_size;
    std::set<ValueId> e;
    for (std::size_t i = 0; i < n; ++i) e.insert(static_cast<ValueId>(rng() % universe));
    s.assign(e.begin(), e.end());
  }
  return sets;
}

// Random binary relation over [0, nx) x [0, ny); a mix of hubs and sparse values.
inline Pairs random_pairs(std::mt19937_64& rng, std::size_t n, std::size_t nx, std::size_t ny) {
  std::set<std::pair<ValueId, ValueId>> out;
  for (std::size_t i = 0; i < n; ++i) {
    ValueId a = static_cast<ValueId>(rng() % nx);
    ValueId b = static_cast<ValueId>(rng() % ny);
    // Bias a third of the tuples towards a few values on each side.
    if (rng() % 3 == 0) a = static_cast<ValueId>(rng() % std::max<std::size_t>(1, nx / 10));
    if (rng() % 3 == 0) b = static_cast<ValueId>(rng() % std::max<std::size_t>(1, ny / 10));
    out.emplace(a, b);
  }
  return {out.begin(), out.end()};
}

inline PairCounts as_counts(const mmjoin::OutputSet& out) {
  PairCounts m;
  for (std::size_t i = 0; i < out.size(); ++i) {
    m[{out.tuple(i)[0], out.tuple(i)[1]}] = out.has_counts() ? out.count(i) : 1;
  }
  return m;
}

inline std::set<std::pair<ValueId, ValueId>> as_pairs(const mmjoin::OutputSet& out) {
  std::set<std::pair<ValueId, ValueId>> s;
  for (std::size_t i = 0; i < out.size(); ++i) s.emplace(out.tuple(i)[0], out.tuple(i)[1]);
  return s;
}

template <typename Map>
std::set<typename Map::key_type> keys(const Map& m) {
  std::set<typename Map::key_type> s;
  for (const auto& kv : m) s.insert(kv.first);
  return s;
}

}  // namespace oracle

namespace oracle {

// Nested loops restricted to equal y through buckets of S; counts per pair.
inline PairCounts two_path_bucketed(const Pairs& r, const Pairs& s) {
  std::map<ValueId, std::vector<ValueId>> by_y;
  for (const auto& [c, y] : s) by_y[y].push_back(c);
  PairCounts out;
  for (const auto& [a, y] : r) {
    auto it = by_y.find(y);
    if (it == by_y.end()) continue;
    for (ValueId c : it->second) ++out[{a, c}];
  }
  return out;
}

inline std::vector<std::uint64_t> packed(const PairCounts& m) {
  std::vector<std::uint64_t> out;
  out.reserve(m.size());
  for (const auto& kv : m) out.push_back((std::uint64_t{kv.first.first} << 32) | kv.first.second);
  return out;
}

}  // namespace oracle
