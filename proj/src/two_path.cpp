#include <optional>
#include <stdexcept>

#include "mmjoin/joinproject.hpp"

namespace mmjoin {

namespace {

void emit(OutputSet& out, ValueId a, const std::vector<ValueId>& zs,
          const std::vector<std::uint64_t>& counts, bool want_counts) {
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (want_counts) {
      out.push_pair(a, zs[i], counts[i]);
    } else {
      out.push_pair(a, zs[i]);
    }
  }
}

// Heavy y -> light z neighbours in S, i.e. the S-minus tuples at heavy y.
Adjacency light_z_lists(const IndexedRelation& s, const TwoPathClassifier& cls, std::size_t y_space) {
  std::vector<Tuple> tuples;
  for (ValueId b = 0; b < y_space; ++b) {
    if (cls.light_y(b)) continue;
    for (ValueId c : s.rev()[b]) {
      if (cls.light_z(c)) tuples.push_back({b, c});
    }
  }
  return Adjacency(y_space, tuples, true);
}

}  // namespace

OutputSet full_join_dedup(const IndexedRelation& r, const IndexedRelation& s, bool want_counts,
                          const JoinOptions& options, JoinStats* stats) {
  OutputSet out(2);
  Deduplicator dedup(s.fwd().key_space(), options.dedup, options.dedup_cache_entries);
  const std::size_t y_space = s.rev().key_space();
  std::vector<ValueId> zs;
  std::vector<std::uint64_t> counts;
  for (ValueId a = 0; a < r.fwd().key_space(); ++a) {
    auto ys = r.fwd()[a];
    if (ys.empty()) continue;
    for (ValueId b : ys) {
      if (b < y_space) dedup.add(s.rev()[b]);
    }
    dedup.finish(zs, counts);
    emit(out, a, zs, counts, want_counts);
  }
  if (stats) stats->light_witnesses = dedup.appended();
  return out;
}

OutputSet two_path_join(const IndexedRelation& r_in, const IndexedRelation& s_in,
                        const ThresholdPlan& plan, bool want_counts, const JoinOptions& options,
                        JoinStats* stats) {
  if (plan.strategy == Strategy::FullJoin) {
    return full_join_dedup(r_in, s_in, want_counts, options, stats);
  }
  if (plan.delta1 < 1 || plan.delta2 < 1) {
    throw std::invalid_argument("threshold plan needs delta1, delta2 >= 1");
  }

  std::optional<IndexedRelation> r_reduced, s_reduced;
  const IndexedRelation* r = &r_in;
  const IndexedRelation* s = &s_in;
  if (!is_semi_join_reduced(r_in, s_in)) {
    auto [rr, sr] = semi_join_reduce(r_in.base(), s_in.base());
    r = &r_reduced.emplace(std::move(rr));
    s = &s_reduced.emplace(std::move(sr));
    if (stats) stats->reduced_internally = true;
  }

  TwoPathClassifier cls(*r, *s, plan.delta1, plan.delta2);
  HeavyMatrices heavy = build_heavy_matrices(*r, *s, cls);
  CountMatrix product = multiply_counts(heavy.m1, heavy.m2, options.multiply);
  if (stats) {
    stats->heavy_rows = heavy.m1.rows();
    stats->heavy_inner = heavy.m1.cols();
    stats->heavy_cols = heavy.m2.cols();
  }

  std::vector<std::int64_t> heavy_row(r->fwd().key_space(), -1);
  for (std::size_t i = 0; i < product.rows(); ++i) {
    heavy_row[product.row_keys[i][0]] = static_cast<std::int64_t>(i);
  }

  const std::size_t y_space = std::min(r->rev().key_space(), s->rev().key_space());
  Adjacency s_minus = light_z_lists(*s, cls, y_space);
  Deduplicator dedup(s->fwd().key_space(), options.dedup, options.dedup_cache_entries);

  // Every witness (a, b, c) is enumerated at most once: through the light
  // R tuple (a, b) with all of S[b], or through a heavy (a, b) with the
  // light S tuples at b. The remaining witnesses are counted by the product.
  OutputSet out(2);
  std::vector<ValueId> zs;
  std::vector<std::uint64_t> counts;
  for (ValueId a = 0; a < r->fwd().key_space(); ++a) {
    auto ys = r->fwd()[a];
    if (ys.empty()) continue;
    bool light_a = cls.light_x(a);
    for (ValueId b : ys) {
      if (b >= y_space) continue;
      if (light_a || cls.light_y(b)) {
        dedup.add(s->rev()[b]);
      } else {
        dedup.add(s_minus[b]);
      }
    }
    if (heavy_row[a] >= 0) {
      auto row = product.row(static_cast<std::size_t>(heavy_row[a]));
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] > 0) dedup.add(product.col_keys[j][0], row[j]);
      }
    }
    dedup.finish(zs, counts);
    emit(out, a, zs, counts, want_counts);
  }
  if (stats) stats->light_witnesses = dedup.appended();
  return out;
}

}  // namespace mmjoin
