#include <algorithm>
#include <array>
#include <stdexcept>

#include "mmjoin/error.hpp"
#include "mmjoin/joinproject.hpp"

namespace mmjoin {

namespace {

constexpr std::size_t kMaxArity = 4;

std::size_t shared_y_space(std::span<const IndexedRelation* const> relations) {
  std::size_t space = relations.empty() ? 0 : relations[0]->rev().key_space();
  for (const IndexedRelation* r : relations) space = std::min(space, r->rev().key_space());
  return space;
}

struct Rest {
  std::array<ValueId, kMaxArity - 1> ids{};
  std::uint64_t weight = 1;
};

}  // namespace

StarClassifier::StarClassifier(std::span<const IndexedRelation* const> relations,
                               std::uint64_t delta1, std::uint64_t delta2)
    : rel_(relations.begin(), relations.end()), delta1_(delta1), delta2_(delta2) {
  if (delta1 < 1 || delta2 < 1) throw std::invalid_argument("degree thresholds must be >= 1");
  if (rel_.size() > 8) throw std::invalid_argument("star classifier supports at most 8 relations");
  std::size_t y_space = shared_y_space(relations);
  heavy_mask_.assign(y_space, 0);
  for (std::size_t i = 0; i < rel_.size(); ++i) {
    for (ValueId b = 0; b < y_space; ++b) {
      if (rel_[i]->right_degree(b) > delta1_) heavy_mask_[b] |= static_cast<std::uint8_t>(1u << i);
    }
  }
}

bool StarClassifier::diamond(std::size_t i, ValueId b) const {
  if (b >= heavy_mask_.size()) return true;
  return (heavy_mask_[b] & ~(1u << i) & 0xffu) == 0;
}

std::vector<IndexedRelation> star_reduce(std::span<const IndexedRelation* const> relations) {
  std::size_t y_space = shared_y_space(relations);
  std::vector<char> everywhere(y_space, 1);
  for (const IndexedRelation* r : relations) {
    for (ValueId b = 0; b < y_space; ++b) {
      if (r->right_degree(b) == 0) everywhere[b] = 0;
    }
  }
  std::vector<IndexedRelation> out;
  out.reserve(relations.size());
  for (const IndexedRelation* r : relations) {
    out.emplace_back(r->base().filter(
        [&](const Tuple& t) { return t.right < y_space && everywhere[t.right] != 0; }));
  }
  return out;
}

StarHeavyMatrices build_star_heavy_matrices(std::span<const IndexedRelation* const> relations,
                                            const StarClassifier& cls, std::size_t row_cap) {
  const std::size_t k = relations.size();
  const std::size_t group1 = (k + 1) / 2;
  const std::size_t y_space = shared_y_space(relations);

  // Heavy join values: at least one heavy tuple in every relation.
  std::vector<ValueId> ys;
  std::vector<std::int64_t> y_col(y_space, -1);
  for (ValueId b = 0; b < y_space; ++b) {
    bool everywhere = true;
    for (std::size_t i = 0; i < k && everywhere; ++i) {
      auto xs = relations[i]->rev()[b];
      everywhere = std::any_of(xs.begin(), xs.end(), [&](ValueId a) { return !cls.light(i, a, b); });
    }
    if (everywhere) {
      y_col[b] = static_cast<std::int64_t>(ys.size());
      ys.push_back(b);
    }
  }

  // Per relation: heavy values and a dense heavy-value x column bitmap.
  std::vector<std::vector<ValueId>> heavy(k);
  std::vector<std::vector<std::uint8_t>> bits(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Adjacency& fwd = relations[i]->fwd();
    for (ValueId a = 0; a < fwd.key_space(); ++a) {
      bool any = false;
      for (ValueId b : fwd[a]) {
        if (b < y_space && y_col[b] >= 0 && !cls.light(i, a, b)) {
          any = true;
          break;
        }
      }
      if (any) heavy[i].push_back(a);
    }
    bits[i].assign(heavy[i].size() * ys.size(), 0);
    for (std::size_t h = 0; h < heavy[i].size(); ++h) {
      ValueId a = heavy[i][h];
      for (ValueId b : fwd[a]) {
        if (b < y_space && y_col[b] >= 0 && !cls.light(i, a, b)) {
          bits[i][h * ys.size() + static_cast<std::size_t>(y_col[b])] = 1;
        }
      }
    }
  }

  auto group_rows = [&](std::size_t begin, std::size_t end) {
    long double rows = 1;
    for (std::size_t i = begin; i < end; ++i) rows *= static_cast<long double>(heavy[i].size());
    if (rows > static_cast<long double>(row_cap)) {
      throw ResourceError("star heavy matrix would have " + std::to_string(static_cast<double>(rows)) +
                          " rows (cap " + std::to_string(row_cap) + "); use a larger delta2");
    }
    return static_cast<std::size_t>(rows);
  };

  // Enumerates the cross product of heavy lists [begin, end) in
  // lexicographic order; calls fn(key, digits).
  auto for_each_combo = [&](std::size_t begin, std::size_t end, auto&& fn) {
    std::size_t width = end - begin;
    for (std::size_t i = begin; i < end; ++i) {
      if (heavy[i].empty()) return;
    }
    std::vector<std::size_t> digit(width, 0);
    std::vector<ValueId> key(width);
    while (true) {
      for (std::size_t d = 0; d < width; ++d) key[d] = heavy[begin + d][digit[d]];
      fn(key, digit);
      std::size_t d = width;
      while (d > 0) {
        --d;
        if (++digit[d] < heavy[begin + d].size()) break;
        digit[d] = 0;
        if (d == 0) return;
      }
      if (width == 0) return;
    }
  };

  const std::size_t cols = ys.size();
  std::size_t rows1 = group_rows(0, group1);
  std::size_t rows2 = group_rows(group1, k);

  StarHeavyMatrices out{CountMatrix(rows1, cols), CountMatrix(cols, rows2)};
  out.v.row_keys = KeyTable(group1);
  out.v.col_keys = KeyTable::of(ys);
  out.wt.row_keys = KeyTable::of(ys);
  out.wt.col_keys = KeyTable(k - group1);

  std::size_t row = 0;
  for_each_combo(0, group1, [&](const std::vector<ValueId>& key, const std::vector<std::size_t>& digit) {
    out.v.row_keys.push(key);
    for (std::size_t col = 0; col < cols; ++col) {
      bool all = true;
      for (std::size_t d = 0; d < digit.size() && all; ++d) all = bits[d][digit[d] * cols + col] != 0;
      out.v.at(row, col) = all ? 1 : 0;
    }
    ++row;
  });
  std::size_t col2 = 0;
  for_each_combo(group1, k, [&](const std::vector<ValueId>& key, const std::vector<std::size_t>& digit) {
    out.wt.col_keys.push(key);
    for (std::size_t c = 0; c < cols; ++c) {
      bool all = true;
      for (std::size_t d = 0; d < digit.size() && all; ++d) {
        all = bits[group1 + d][digit[d] * cols + c] != 0;
      }
      out.wt.at(c, col2) = all ? 1 : 0;
    }
    ++col2;
  });
  return out;
}

OutputSet star_join(std::span<const IndexedRelation* const> relations_in, std::uint64_t delta1,
                    std::uint64_t delta2, bool want_counts, const JoinOptions& options,
                    JoinStats* stats) {
  const std::size_t k = relations_in.size();
  if (k < 2 || k > kMaxArity) {
    throw std::invalid_argument("star_join supports 2 to 4 relations, got " + std::to_string(k));
  }
  std::vector<IndexedRelation> reduced = star_reduce(relations_in);
  std::vector<const IndexedRelation*> relations;
  for (const IndexedRelation& r : reduced) relations.push_back(&r);

  StarClassifier cls(relations, delta1, delta2);
  StarHeavyMatrices heavy = build_star_heavy_matrices(relations, cls, options.star_row_cap);
  CountMatrix product = multiply_counts(heavy.v, heavy.wt, options.multiply);
  if (stats) {
    stats->heavy_rows = heavy.v.rows();
    stats->heavy_inner = heavy.v.cols();
    stats->heavy_cols = heavy.wt.cols();
  }

  const std::size_t y_space = shared_y_space(relations);
  const std::size_t group1 = (k + 1) / 2;
  OutputSet out(k);
  std::vector<Rest> buffer;
  std::uint64_t light_witnesses = 0;
  std::size_t product_row = 0;

  // Sub-lists of relation i at y = b, split by tuple class.
  std::vector<std::vector<ValueId>> light_part(k), heavy_part(k);
  std::vector<std::span<const ValueId>> lists(k);

  for (ValueId a1 = 0; a1 < relations[0]->fwd().key_space(); ++a1) {
    auto ys = relations[0]->fwd()[a1];
    if (ys.empty()) continue;
    buffer.clear();

    for (ValueId b : ys) {
      if (b >= y_space) continue;
      for (std::size_t i = 1; i < k; ++i) {
        light_part[i].clear();
        heavy_part[i].clear();
        for (ValueId a : relations[i]->rev()[b]) {
          (cls.light(i, a, b) ? light_part[i] : heavy_part[i]).push_back(a);
        }
      }
      // A witness is light when any of its tuples is light. Enumerate each
      // light witness once, keyed by the first light position j.
      bool first_light = cls.light(0, a1, b);
      for (std::size_t j = first_light ? 0 : 1; j < k; ++j) {
        bool empty = false;
        for (std::size_t i = 1; i < k; ++i) {
          if (first_light || i > j) {
            lists[i] = relations[i]->rev()[b];
          } else if (i == j) {
            lists[i] = light_part[i];
          } else {
            lists[i] = heavy_part[i];
          }
          empty = empty || lists[i].empty();
        }
        if (!empty) {
          std::array<std::size_t, kMaxArity> pos{};
          while (true) {
            Rest rest;
            for (std::size_t i = 1; i < k; ++i) rest.ids[i - 1] = lists[i][pos[i]];
            buffer.push_back(rest);
            ++light_witnesses;
            std::size_t i = k - 1;
            while (i >= 1) {
              if (++pos[i] < lists[i].size()) break;
              pos[i] = 0;
              --i;
            }
            if (i == 0) break;
          }
        }
        if (first_light) break;
      }
    }

    while (product_row < product.rows() && product.row_keys[product_row][0] < a1) ++product_row;
    for (std::size_t pr = product_row; pr < product.rows() && product.row_keys[pr][0] == a1; ++pr) {
      auto row_key = product.row_keys[pr];
      auto row = product.row(pr);
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] == 0) continue;
        Rest rest;
        rest.weight = row[j];
        auto col_key = product.col_keys[j];
        for (std::size_t d = 1; d < group1; ++d) rest.ids[d - 1] = row_key[d];
        for (std::size_t d = 0; d < col_key.size(); ++d) rest.ids[group1 - 1 + d] = col_key[d];
        buffer.push_back(rest);
      }
    }

    std::sort(buffer.begin(), buffer.end(),
              [](const Rest& x, const Rest& y) { return x.ids < y.ids; });
    std::array<ValueId, kMaxArity> t{};
    t[0] = a1;
    for (std::size_t i = 0; i < buffer.size();) {
      std::uint64_t count = 0;
      std::size_t j = i;
      while (j < buffer.size() && buffer[j].ids == buffer[i].ids) count += buffer[j++].weight;
      std::copy_n(buffer[i].ids.begin(), k - 1, t.begin() + 1);
      if (want_counts) {
        out.push(std::span<const ValueId>(t.data(), k), count);
      } else {
        out.push(std::span<const ValueId>(t.data(), k));
      }
      i = j;
    }
  }
  if (stats) stats->light_witnesses = light_witnesses;
  return out;
}

}  // namespace mmjoin
