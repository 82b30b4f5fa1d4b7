#pragma once

#include <utility>
#include <vector>

#include "mmjoin/relation.hpp"
#include "oracles.hpp"

namespace fixture {

inline mmjoin::IndexedRelation indexed(const oracle::Pairs& pairs, std::size_t nx = 0,
                                       std::size_t ny = 0, const char* name = "R") {
  return mmjoin::IndexedRelation(mmjoin::Relation::from_pairs(name, pairs, nx, ny));
}

// The two relations drawn in the worked two-path instance.
inline oracle::Pairs example_r() {
  return {{1, 6}, {2, 1}, {2, 2}, {3, 5}, {3, 3}, {4, 4}, {4, 1},
          {4, 6}, {5, 4}, {5, 5}, {5, 6}, {6, 4}, {6, 5}, {6, 2}};
}
inline oracle::Pairs example_s() {
  return {{1, 6}, {1, 2}, {2, 6}, {2, 3}, {3, 3}, {4, 4}, {4, 5},
          {4, 1}, {5, 4}, {5, 5}, {5, 6}, {6, 2}, {6, 5}, {6, 6}};
}
inline oracle::Pairs example_t() {
  return {{1, 1}, {1, 3}, {2, 2}, {6, 1}, {3, 3}, {3, 4}, {4, 4}, {4, 5},
          {4, 6}, {5, 4}, {5, 5}, {5, 6}, {6, 2}, {6, 5}, {6, 6}};
}
inline oracle::Pairs example_u() {
  return {{1, 1}, {2, 2}, {2, 5}, {3, 3}, {4, 4}, {4, 5}, {4, 6},
          {5, 4}, {5, 5}, {5, 6}, {6, 4}, {6, 5}, {6, 6}};
}

// Probe sets A1..A4 and listed sets C1..C6 over elements b1..b7 of the
// prefix-tree walkthrough. Index 0 is unused on every side.
inline std::vector<std::vector<mmjoin::ValueId>> prefix_probe() {
  return {{}, {1, 2, 3}, {1, 2, 4}, {1, 5, 7}, {1, 5}};
}
inline std::vector<std::vector<mmjoin::ValueId>> prefix_lists() {
  return {{}, {1, 2}, {1, 2}, {1, 2, 3, 5}, {1, 4, 5}, {3, 7}, {4}};
}

}  // namespace fixture
