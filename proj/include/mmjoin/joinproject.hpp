#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mmjoin/matmul.hpp"
#include "mmjoin/plan.hpp"
#include "mmjoin/relation.hpp"

namespace mmjoin {

/// Deduplicated projected result: a sorted list of distinct k-tuples
/// (k = arity) with optional witness counts.
class OutputSet {
 public:
  explicit OutputSet(std::size_t arity = 2) : arity_(arity) {}

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return arity_ == 0 ? 0 : ids_.size() / arity_; }
  bool empty() const { return ids_.empty(); }
  bool has_counts() const { return has_counts_; }

  std::span<const ValueId> tuple(std::size_t i) const { return {ids_.data() + i * arity_, arity_}; }
  std::uint64_t count(std::size_t i) const { return counts_.at(i); }
  std::span<const std::uint64_t> counts() const { return counts_; }

  void push(std::span<const ValueId> t) { ids_.insert(ids_.end(), t.begin(), t.end()); }
  void push(std::span<const ValueId> t, std::uint64_t count) {
    push(t);
    counts_.push_back(count);
    has_counts_ = true;
  }
  void push_pair(ValueId a, ValueId c) {
    ids_.push_back(a);
    ids_.push_back(c);
  }
  void push_pair(ValueId a, ValueId c, std::uint64_t count) {
    push_pair(a, c);
    counts_.push_back(count);
    has_counts_ = true;
  }

  /// Sorts lexicographically and merges duplicate tuples (counts add up).
  void canonicalize();
  bool contains(std::span<const ValueId> t) const;
  void drop_counts() {
    counts_.clear();
    has_counts_ = false;
  }
  void reserve(std::size_t n) { ids_.reserve(n * arity_); }

  /// Pairs packed as (a << 32 | c); only for arity 2.
  std::vector<std::uint64_t> packed_pairs() const;

  /// Same tuple set (counts ignored).
  bool same_tuples(const OutputSet& other) const {
    return arity_ == other.arity_ && ids_ == other.ids_;
  }
  std::uint64_t total_count() const;

 private:
  std::size_t arity_;
  std::vector<ValueId> ids_;
  std::vector<std::uint64_t> counts_;
  bool has_counts_ = false;
};

/// One side of a two-path partition.
struct Partition {
  Relation light;
  Relation heavy;
  std::uint64_t delta1 = 1;
  std::uint64_t delta2 = 1;
};

/// Light/heavy classification shared by the partitioner, the light join
/// and the heavy matrix builder.
///
/// A tuple (a, b) of R is light when deg_R(a) <= delta2 or b is a light
/// join value; likewise (c, b) of S with deg_S(c). A join value b is light
/// when its degree is <= delta1 in both R and S.
class TwoPathClassifier {
 public:
  TwoPathClassifier(const IndexedRelation& r, const IndexedRelation& s, std::uint64_t delta1,
                    std::uint64_t delta2);

  bool light_x(ValueId a) const { return r_.left_degree(a) <= delta2_; }
  bool light_z(ValueId c) const { return s_.left_degree(c) <= delta2_; }
  bool light_y(ValueId b) const {
    return r_.right_degree(b) <= delta1_ && s_.right_degree(b) <= delta1_;
  }
  bool light_in_r(ValueId a, ValueId b) const { return light_x(a) || light_y(b); }
  bool light_in_s(ValueId c, ValueId b) const { return light_z(c) || light_y(b); }

  std::uint64_t delta1() const { return delta1_; }
  std::uint64_t delta2() const { return delta2_; }

 private:
  const IndexedRelation& r_;
  const IndexedRelation& s_;
  std::uint64_t delta1_;
  std::uint64_t delta2_;
};

std::pair<Partition, Partition> partition_two_path(const IndexedRelation& r,
                                                   const IndexedRelation& s, std::uint64_t delta1,
                                                   std::uint64_t delta2);

/// Adjacency matrices of the heavy parts: m1 is heavy x by heavy y, m2 is
/// heavy y by heavy z. Keys are ascending value ids.
struct HeavyMatrices {
  CountMatrix m1;
  CountMatrix m2;
};

HeavyMatrices build_heavy_matrices(const IndexedRelation& r, const IndexedRelation& s,
                                   const TwoPathClassifier& cls);

enum class DedupStrategy { Auto, VectorReuse, SortBased };

const char* to_string(DedupStrategy s);

/// Union of the z lists reached from a fixed x value, with per-z witness
/// counts. VectorReuse keeps a dense counter array over dom(z) that is
/// reset through a touched list; SortBased appends and sorts. Both emit
/// ascending z with identical counts.
class Deduplicator {
 public:
  Deduplicator(std::size_t z_space, DedupStrategy strategy, std::size_t cache_entries = 1u << 16);

  void add(std::span<const ValueId> zs);
  void add(ValueId z, std::uint64_t count);
  /// Writes the deduplicated result and resets for the next x value.
  void finish(std::vector<ValueId>& zs, std::vector<std::uint64_t>& counts);

  DedupStrategy strategy() const { return strategy_; }
  std::uint64_t appended() const { return appended_; }

 private:
  DedupStrategy strategy_;
  std::vector<std::uint64_t> counter_;
  std::vector<ValueId> touched_;
  std::vector<ValueId> buffer_;
  std::vector<std::pair<ValueId, std::uint64_t>> weighted_;
  std::uint64_t appended_ = 0;
};

/// Deduplicated union of s_rev[b] over b in ys.
std::vector<ValueId> dedup_light(std::span<const ValueId> ys, const Adjacency& s_rev,
                                 DedupStrategy strategy, std::size_t cache_entries = 1u << 16);

struct JoinOptions {
  MultiplyOptions multiply{};
  DedupStrategy dedup = DedupStrategy::Auto;
  std::size_t dedup_cache_entries = 1u << 16;
  // Cap on star heavy-matrix rows (product of heavy list sizes per group).
  std::size_t star_row_cap = 1u << 20;
};

/// Counters filled by the join algorithms.
struct JoinStats {
  std::uint64_t light_witnesses = 0;  // join tuples enumerated by the light part
  std::size_t heavy_rows = 0;
  std::size_t heavy_inner = 0;
  std::size_t heavy_cols = 0;
  bool reduced_internally = false;
};

/// pi_{x,z}(R(x,y) join S(z,y)). Light tuples are expanded through the
/// indexes with per-x deduplication; heavy tuples go through one count
/// matrix product. With want_counts each pair carries its number of
/// witnesses y. Throws std::invalid_argument for thresholds below 1.
OutputSet two_path_join(const IndexedRelation& r, const IndexedRelation& s,
                        const ThresholdPlan& plan, bool want_counts = false,
                        const JoinOptions& options = {}, JoinStats* stats = nullptr);

/// Full join through the y index followed by per-x deduplication.
OutputSet full_join_dedup(const IndexedRelation& r, const IndexedRelation& s,
                          bool want_counts = false, const JoinOptions& options = {},
                          JoinStats* stats = nullptr);

/// V (group-one heavy combinations x heavy y) and W^T (heavy y x group-two
/// heavy combinations) for a star query.
struct StarHeavyMatrices {
  CountMatrix v;
  CountMatrix wt;
};

/// Three-way star partition of relation i:
///   minus   : deg_i(a) <= delta2
///   diamond : b has degree <= delta1 in every other relation
///   plus    : everything else
class StarClassifier {
 public:
  StarClassifier(std::span<const IndexedRelation* const> relations, std::uint64_t delta1,
                 std::uint64_t delta2);

  bool light_x(std::size_t i, ValueId a) const { return rel_[i]->left_degree(a) <= delta2_; }
  bool diamond(std::size_t i, ValueId b) const;
  bool light(std::size_t i, ValueId a, ValueId b) const { return light_x(i, a) || diamond(i, b); }
  std::size_t arity() const { return rel_.size(); }

 private:
  std::vector<const IndexedRelation*> rel_;
  std::uint64_t delta1_;
  std::uint64_t delta2_;
  // Per y: number of relations in which b has degree > delta1.
  std::vector<std::uint8_t> heavy_in_;
  // Per y: bitmask of relations in which b has degree > delta1.
  std::vector<std::uint8_t> heavy_mask_;
};

StarHeavyMatrices build_star_heavy_matrices(std::span<const IndexedRelation* const> relations,
                                            const StarClassifier& cls, std::size_t row_cap);

/// pi_{x1..xk}(R1(x1,y) join ... join Rk(xk,y)) for 2 <= k <= 4.
OutputSet star_join(std::span<const IndexedRelation* const> relations, std::uint64_t delta1,
                    std::uint64_t delta2, bool want_counts = false,
                    const JoinOptions& options = {}, JoinStats* stats = nullptr);

/// Keeps only tuples whose y occurs in every relation.
std::vector<IndexedRelation> star_reduce(std::span<const IndexedRelation* const> relations);

}  // namespace mmjoin
