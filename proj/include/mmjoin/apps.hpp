#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmjoin/joinproject.hpp"
#include "mmjoin/plan.hpp"
#include "mmjoin/relation.hpp"

namespace mmjoin {

/// A family of sets stored as the relation R(set, element). Sets without
/// elements do not occur in the relation.
class SetFamily {
 public:
  SetFamily() = default;
  explicit SetFamily(Relation r);

  /// Set i gets id i; elements are taken as ids directly.
  static SetFamily from_sets(const std::vector<std::vector<ValueId>>& sets);

  const IndexedRelation& index() const { return index_; }
  const Relation& relation() const { return index_.base(); }

  /// Size of the set-id space (including ids of empty sets).
  std::size_t set_space() const { return index_.base().left_id_space(); }
  std::size_t element_space() const { return index_.base().right_id_space(); }

  std::span<const ValueId> elements(ValueId set) const { return index_.fwd()[set]; }
  std::size_t set_size(ValueId set) const { return index_.left_degree(set); }
  /// Inverted list of an element: the sets containing it.
  std::span<const ValueId> sets_with(ValueId element) const { return index_.rev()[element]; }

  /// Ids of the non-empty sets, ascending.
  std::vector<ValueId> active_sets() const;

  /// Subfamily of the sets accepted by keep; ids and dictionaries are kept.
  template <typename Pred>
  SetFamily restrict(Pred&& keep) const {
    return SetFamily(relation().filter([&](const Tuple& t) { return keep(t.left); }));
  }

 private:
  IndexedRelation index_;
};

struct SsjOptions {
  JoinOptions join{};
  /// Plan for the two-path joins; a closed-form plan is derived when unset.
  std::optional<ThresholdPlan> plan;
  /// Maximum number of c-subsets the light part may generate.
  std::uint64_t subset_cap = 1'000'000;
};

/// Pairs (a, b), a < b, with |a ∩ b| >= c and their exact overlap counts.
OutputSet ssj_mmjoin(const SetFamily& sets, std::uint64_t c, const SsjOptions& options = {});

/// Modeled costs of splitting the family at a size boundary x: sets with
/// size >= x are heavy.
struct BoundaryCost {
  std::uint64_t boundary = 0;
  double heavy = 0;  // sum over heavy h, other r of min(|r|, |h|)
  double light = 0;  // sum over light r of C(|r|, c)
  double total() const { return heavy + light; }
};

/// Cost of every candidate boundary: each distinct set size and max + 1.
std::vector<BoundaryCost> size_boundary_costs(const SetFamily& sets, std::uint64_t c);
/// Candidate with the least total cost; ties go to the smallest boundary.
std::uint64_t get_size_boundary(const SetFamily& sets, std::uint64_t c);

/// Heavy sets are merge-joined against every set; light pairs come from an
/// inverted index over c-subsets. Throws ResourceError beyond subset_cap.
OutputSet ssj_size_aware(const SetFamily& sets, std::uint64_t c, const SsjOptions& options = {});

/// Stack-based prefix tree over probe sets ordered along a global element
/// order (longer inverted lists first). Each materialized node keeps
///   output   : sets reached >= c times along the path
///   residual : the remaining sets with their counts (< c)
/// so sets sharing a prefix reuse the merged lists of that prefix. Nodes
/// deeper than depth_cap are not materialized.
class PrefixTree {
 public:
  struct Node {
    std::vector<ValueId> path;  // elements, in global order
    std::vector<ValueId> output;
    std::vector<std::pair<ValueId, std::uint32_t>> residual;
  };

  /// lists supplies the inverted lists, probe the sets that are matched.
  PrefixTree(const SetFamily& probe, const SetFamily& lists, std::uint64_t c,
             std::size_t depth_cap = 8);

  /// Emits (probe set, listed set) for every listed set reached >= c times.
  /// With reuse disabled every set merges its lists from scratch.
  void run(const std::function<void(ValueId, std::span<const ValueId>)>& emit, bool reuse = true);

  /// Inverted-list elements visited by the last run.
  std::uint64_t ops() const { return ops_; }
  /// Visited elements per probe set in the last run.
  const std::vector<std::pair<ValueId, std::uint64_t>>& ops_per_set() const { return per_set_; }

  /// Records every materialized node of the following runs.
  void keep_snapshots(bool on) { keep_snapshots_ = on; }
  const std::vector<Node>& snapshots() const { return snapshots_; }

  /// Elements in the global order used for paths.
  const std::vector<ValueId>& order() const { return order_; }

 private:
  void extend(const Node& from, ValueId element, Node& to);

  const SetFamily& probe_;
  const SetFamily& lists_;
  std::uint64_t c_;
  std::size_t depth_cap_;
  std::vector<ValueId> order_;
  std::vector<std::uint32_t> rank_;
  std::uint64_t ops_ = 0;
  std::vector<std::pair<ValueId, std::uint64_t>> per_set_;
  bool keep_snapshots_ = false;
  std::vector<Node> snapshots_;
};

enum class LightMethod { None, PrefixTree, Subsets, MatrixMultiply };

const char* to_string(LightMethod m);

struct SsjPlusResult {
  OutputSet pairs{2};
  /// Inverted-list elements visited by the prefix tree.
  std::uint64_t ops = 0;
  std::uint64_t boundary = 0;
  LightMethod light_method = LightMethod::None;
};

/// SizeAware with the heavy part as one two-path join (all sets against
/// heavy sets) and the light part through the prefix tree, or with
/// depth cap 0 through c-subsets or a two-path join when the light full
/// join exceeds its output estimate or the subset cap.
SsjPlusResult ssj_size_aware_pp(const SetFamily& sets, std::uint64_t c,
                                std::size_t prefix_depth_cap = 8, const SsjOptions& options = {});

struct RankedPair {
  ValueId a = 0;
  ValueId b = 0;
  std::uint64_t overlap = 0;

  friend bool operator==(const RankedPair&, const RankedPair&) = default;
};

/// ssj_mmjoin pairs by overlap descending, then (a, b) ascending.
std::vector<RankedPair> ssj_ordered(const SetFamily& sets, std::uint64_t c,
                                    const SsjOptions& options = {});

/// Ordered pairs (a, b), a != b, with a ⊆ b.
OutputSet scj_join_project(const SetFamily& sets, const SsjOptions& options = {});

inline constexpr ValueId kUnknownSet = std::numeric_limits<ValueId>::max();

enum class BsiAnswer { Disjoint, Intersecting, UnknownSet };

const char* to_string(BsiAnswer a);

/// Answers "does set a of R intersect set b of S" for a batch. R and S are
/// restricted to the requested sets and joined once. Ids that are out of
/// range or name empty sets yield UnknownSet.
std::vector<BsiAnswer> bsi_answer_batch(const IndexedRelation& r, const IndexedRelation& s,
                                        std::span<const std::pair<ValueId, ValueId>> batch,
                                        const JoinOptions& options = {});

/// ceil((B * N)^(3/5)).
std::uint64_t bsi_batch_size(double rate, double n);

struct BsiQuery {
  ValueId a = 0;
  ValueId b = 0;
  double arrival = 0;
};

struct BsiWorkload {
  std::vector<BsiQuery> queries;  // arrivals nondecreasing
  double rate = 1;                // queries per time unit
};

/// Lines `a b arrival`; tokens are looked up in the set dictionaries of R
/// and S (unknown tokens become kUnknownSet). The rate is taken from the
/// arrival span. Throws ParseError on malformed lines or decreasing times.
BsiWorkload parse_bsi_workload(std::istream& in, const Dictionary& r_sets, const Dictionary& s_sets);

/// Evenly spaced arrivals at the given rate.
BsiWorkload uniform_bsi_workload(std::vector<std::pair<ValueId, ValueId>> pairs, double rate);

struct BsiSimulation {
  double average_delay = 0;
  std::size_t batches = 0;
  /// B * T(C) / C: processing units needed to keep up with the arrivals.
  double implied_units = 0;
};

/// Single-server virtual clock: queries are grouped into consecutive
/// batches of batch_size; a batch starts once its last query has arrived
/// and the previous batch is done, and takes batch_cost(batch length) time
/// units. The final partial batch starts at its last arrival.
BsiSimulation bsi_simulate(const BsiWorkload& workload, std::size_t batch_size,
                           const std::function<double(std::size_t)>& batch_cost);

}  // namespace mmjoin
