#include <stdexcept>

#include "mmjoin/joinproject.hpp"

namespace mmjoin {

TwoPathClassifier::TwoPathClassifier(const IndexedRelation& r, const IndexedRelation& s,
                                     std::uint64_t delta1, std::uint64_t delta2)
    : r_(r), s_(s), delta1_(delta1), delta2_(delta2) {
  if (delta1 < 1 || delta2 < 1) throw std::invalid_argument("degree thresholds must be >= 1");
}

std::pair<Partition, Partition> partition_two_path(const IndexedRelation& r,
                                                   const IndexedRelation& s, std::uint64_t delta1,
                                                   std::uint64_t delta2) {
  TwoPathClassifier cls(r, s, delta1, delta2);
  auto r_light = [&](const Tuple& t) { return cls.light_in_r(t.left, t.right); };
  auto s_light = [&](const Tuple& t) { return cls.light_in_s(t.left, t.right); };
  Partition pr{r.base().filter(r_light), r.base().filter([&](const Tuple& t) { return !r_light(t); }),
               delta1, delta2};
  Partition ps{s.base().filter(s_light), s.base().filter([&](const Tuple& t) { return !s_light(t); }),
               delta1, delta2};
  return {std::move(pr), std::move(ps)};
}

HeavyMatrices build_heavy_matrices(const IndexedRelation& r, const IndexedRelation& s,
                                   const TwoPathClassifier& cls) {
  const std::size_t y_space = std::min(r.rev().key_space(), s.rev().key_space());

  // A join value is a column when it is heavy and has a heavy tuple on both sides.
  std::vector<ValueId> ys;
  std::vector<std::int64_t> y_col(y_space, -1);
  for (ValueId b = 0; b < y_space; ++b) {
    if (cls.light_y(b)) continue;
    bool in_r = false, in_s = false;
    for (ValueId a : r.rev()[b]) {
      if (!cls.light_x(a)) {
        in_r = true;
        break;
      }
    }
    for (ValueId c : s.rev()[b]) {
      if (!cls.light_z(c)) {
        in_s = true;
        break;
      }
    }
    if (in_r && in_s) {
      y_col[b] = static_cast<std::int64_t>(ys.size());
      ys.push_back(b);
    }
  }

  auto heavy_side = [&](const IndexedRelation& rel, bool is_r) {
    std::vector<ValueId> keys;
    for (ValueId a = 0; a < rel.fwd().key_space(); ++a) {
      bool light = is_r ? cls.light_x(a) : cls.light_z(a);
      if (light) continue;
      for (ValueId b : rel.fwd()[a]) {
        if (b < y_space && y_col[b] >= 0) {
          keys.push_back(a);
          break;
        }
      }
    }
    return keys;
  };
  std::vector<ValueId> xs = heavy_side(r, true);
  std::vector<ValueId> zs = heavy_side(s, false);

  HeavyMatrices out{CountMatrix(xs.size(), ys.size()), CountMatrix(ys.size(), zs.size())};
  out.m1.row_keys = KeyTable::of(xs);
  out.m1.col_keys = KeyTable::of(ys);
  out.m2.row_keys = KeyTable::of(ys);
  out.m2.col_keys = KeyTable::of(zs);

  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (ValueId b : r.fwd()[xs[i]]) {
      if (b < y_space && y_col[b] >= 0) out.m1.at(i, static_cast<std::size_t>(y_col[b])) = 1;
    }
  }
  std::vector<std::int64_t> z_col(s.fwd().key_space(), -1);
  for (std::size_t j = 0; j < zs.size(); ++j) z_col[zs[j]] = static_cast<std::int64_t>(j);
  for (std::size_t k = 0; k < ys.size(); ++k) {
    for (ValueId c : s.rev()[ys[k]]) {
      if (z_col[c] >= 0) out.m2.at(k, static_cast<std::size_t>(z_col[c])) = 1;
    }
  }
  return out;
}

}  // namespace mmjoin
