#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mmjoin {

using ValueId = std::uint32_t;

struct Tuple {
  ValueId left = 0;
  ValueId right = 0;

  friend auto operator<=>(const Tuple&, const Tuple&) = default;
};

/// Bidirectional map between raw tokens and dense ids. Ids are assigned in
/// first-seen order, so every id in [0, size()) has a token.
class Dictionary {
 public:
  ValueId intern(std::string_view token);
  std::optional<ValueId> find(std::string_view token) const;
  const std::string& token(ValueId id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }

  /// Dictionary whose tokens are the decimal strings "0".."n-1".
  static std::shared_ptr<Dictionary> identity(std::size_t n);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, ValueId> ids_;
};

/// Binary relation R(left, right) over dictionary-encoded values with set
/// semantics. Tuples are kept sorted by (left, right) and unique.
///
/// Relations that are joined on a column must share that column's
/// dictionary; joins operate on ids only.
class Relation {
 public:
  Relation() : Relation("", std::make_shared<Dictionary>(), std::make_shared<Dictionary>()) {}
  Relation(std::string name, std::shared_ptr<Dictionary> left_dict,
           std::shared_ptr<Dictionary> right_dict);

  /// Builds a relation from already-encoded tuples; duplicates are dropped.
  /// Ids must be below the respective dictionary sizes.
  static Relation from_ids(std::string name, std::vector<Tuple> tuples,
                           std::shared_ptr<Dictionary> left_dict,
                           std::shared_ptr<Dictionary> right_dict);

  /// Convenience for tests and generators: identity dictionaries sized to
  /// the largest id present (or the given minimum sizes).
  static Relation from_pairs(std::string name, const std::vector<std::pair<ValueId, ValueId>>& pairs,
                             std::size_t left_domain = 0, std::size_t right_domain = 0);

  const std::string& name() const { return name_; }
  std::span<const Tuple> tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }

  /// Size of the id space of each column (dictionary size), not the active domain.
  std::size_t left_id_space() const { return left_dict_->size(); }
  std::size_t right_id_space() const { return right_dict_->size(); }

  const std::shared_ptr<Dictionary>& left_dict() const { return left_dict_; }
  const std::shared_ptr<Dictionary>& right_dict() const { return right_dict_; }

  bool contains(ValueId left, ValueId right) const;

  /// Keeps only tuples satisfying pred; dictionaries are shared with *this.
  template <typename Pred>
  Relation filter(Pred&& pred, std::string name = {}) const {
    std::vector<Tuple> kept;
    for (const Tuple& t : tuples_) {
      if (pred(t)) kept.push_back(t);
    }
    Relation out(name.empty() ? name_ : std::move(name), left_dict_, right_dict_);
    out.tuples_ = std::move(kept);
    return out;
  }

 private:
  void normalize();

  std::string name_;
  std::shared_ptr<Dictionary> left_dict_;
  std::shared_ptr<Dictionary> right_dict_;
  std::vector<Tuple> tuples_;
};

/// Reads whitespace-separated `left right` lines; `#` lines and blank lines
/// are skipped. Pass existing dictionaries to share an encoding between
/// relations that will be joined.
Relation parse_edge_list(std::istream& in, std::string name = "R",
                         std::shared_ptr<Dictionary> left_dict = nullptr,
                         std::shared_ptr<Dictionary> right_dict = nullptr);

Relation load_edge_list(const std::string& path, std::string name = {},
                        std::shared_ptr<Dictionary> left_dict = nullptr,
                        std::shared_ptr<Dictionary> right_dict = nullptr);

void write_edge_list(std::ostream& out, const Relation& r);

/// Removes tuples whose right value does not occur in the other relation.
std::pair<Relation, Relation> semi_join_reduce(const Relation& r, const Relation& s);

/// Compressed adjacency: for each key id, a strictly increasing neighbour list.
class Adjacency {
 public:
  Adjacency() : offsets_(1, 0) {}
  Adjacency(std::size_t key_space, std::span<const Tuple> tuples, bool by_left);

  std::span<const ValueId> operator[](ValueId key) const {
    if (key + 1 >= offsets_.size()) return {};
    return {targets_.data() + offsets_[key], targets_.data() + offsets_[key + 1]};
  }
  std::size_t degree(ValueId key) const {
    return key + 1 < offsets_.size() ? offsets_[key + 1] - offsets_[key] : 0;
  }
  std::size_t key_space() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size(); }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<ValueId> targets_;
};

/// Relation plus forward (left -> rights) and reverse (right -> lefts)
/// indexes. Immutable after construction; safe for concurrent reads.
class IndexedRelation {
 public:
  IndexedRelation() = default;
  explicit IndexedRelation(Relation base);

  const Relation& base() const { return base_; }
  const Adjacency& fwd() const { return fwd_; }
  const Adjacency& rev() const { return rev_; }
  std::size_t size() const { return base_.size(); }

  std::size_t left_degree(ValueId a) const { return fwd_.degree(a); }
  std::size_t right_degree(ValueId b) const { return rev_.degree(b); }

  /// Number of left values with degree >= 1.
  std::size_t left_domain() const { return left_active_; }
  std::size_t right_domain() const { return right_active_; }

  bool contains(ValueId a, ValueId b) const;

 private:
  Relation base_;
  Adjacency fwd_;
  Adjacency rev_;
  std::size_t left_active_ = 0;
  std::size_t right_active_ = 0;
};

IndexedRelation build_indexed(Relation r);

/// |R join S| on the right column: sum over b of deg_R(b) * deg_S(b).
std::uint64_t full_join_size(const IndexedRelation& r, const IndexedRelation& s);

/// True when every right value of r occurs in s and vice versa.
bool is_semi_join_reduced(const IndexedRelation& r, const IndexedRelation& s);

/// Degree distribution of one column with prefix indexes. All queries are
/// binary searches over the sorted degree vector.
class ColumnStats {
 public:
  ColumnStats() = default;
  /// degrees[v] is the degree of value v; effort[v] a per-value weight
  /// accumulated by effort(). Values with degree 0 are ignored.
  ColumnStats(std::span<const std::uint64_t> degrees, std::span<const std::uint64_t> effort);

  /// Number of values with 1 <= degree <= delta.
  std::uint64_t count(std::uint64_t delta) const;
  /// Sum of degrees over values with degree <= delta.
  std::uint64_t degree_mass(std::uint64_t delta) const;
  /// Sum of effort weights over values with degree <= delta.
  std::uint64_t effort(std::uint64_t delta) const;

  std::uint64_t domain() const { return sorted_degrees_.size(); }
  std::uint64_t max_degree() const { return sorted_degrees_.empty() ? 0 : sorted_degrees_.back(); }
  std::span<const std::uint64_t> sorted_degrees() const { return sorted_degrees_; }

 private:
  std::size_t rank(std::uint64_t delta) const;

  std::vector<std::uint64_t> sorted_degrees_;
  std::vector<std::uint64_t> degree_prefix_;
  std::vector<std::uint64_t> effort_prefix_;
};

/// Per-column statistics of one relation R(x, y).
///   count_x / count_y : values with degree <= delta
///   cdfx(delta)       : sum of |rev[b]| over y values b with degree <= delta
///   sum_x(delta)      : sum over light a of sum_{b in fwd[a]} |rev[b]|
///   sum_y(delta)      : sum over light b of |rev[b]|^2
struct DegreeStats {
  ColumnStats left;
  ColumnStats right;

  std::uint64_t count_x(std::uint64_t delta) const { return left.count(delta); }
  std::uint64_t count_y(std::uint64_t delta) const { return right.count(delta); }
  std::uint64_t cdfx(std::uint64_t delta) const { return right.degree_mass(delta); }
  std::uint64_t sum_x(std::uint64_t delta) const { return left.effort(delta); }
  std::uint64_t sum_y(std::uint64_t delta) const { return right.effort(delta); }
};

DegreeStats degree_stats(const IndexedRelation& r);

/// Nodes are split into num_communities contiguous, evenly sized blocks and
/// every ordered pair (u, v) inside a block, u == v included, becomes a
/// tuple independently with probability intra_edge_prob. Both columns share
/// one node dictionary.
Relation generate_community_graph(std::size_t num_nodes, std::size_t num_communities,
                                  double intra_edge_prob, std::uint64_t seed);

/// Uniform random relation with roughly num_tuples distinct tuples.
Relation generate_uniform_relation(std::size_t left_domain, std::size_t right_domain,
                                   std::size_t num_tuples, std::uint64_t seed,
                                   std::shared_ptr<Dictionary> left_dict = nullptr,
                                   std::shared_ptr<Dictionary> right_dict = nullptr);

/// Random relation whose left degrees follow a Zipf-like law (exponent
/// skew), producing a mix of heavy and light values on both columns.
Relation generate_skewed_relation(std::size_t left_domain, std::size_t right_domain,
                                  std::size_t num_tuples, double skew, std::uint64_t seed,
                                  std::shared_ptr<Dictionary> left_dict = nullptr,
                                  std::shared_ptr<Dictionary> right_dict = nullptr);

}  // namespace mmjoin
