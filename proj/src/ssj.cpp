#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mmjoin/apps.hpp"
#include "mmjoin/error.hpp"
#include "mmjoin/optimizer.hpp"

namespace mmjoin {

namespace {

void require_overlap(std::uint64_t c) {
  if (c == 0) throw std::invalid_argument("overlap threshold c must be at least 1");
}

double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  double r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

std::size_t merge_overlap(std::span<const ValueId> x, std::span<const ValueId> y) {
  std::size_t i = 0, j = 0, n = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] < y[j]) {
      ++i;
    } else if (y[j] < x[i]) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

ThresholdPlan plan_for(const IndexedRelation& r, const IndexedRelation& s, const SsjOptions& o) {
  return o.plan ? *o.plan : closed_form_plan(r, s);
}

// Pairs of sets with count >= c from a two-path join of r against s, as
// unordered pairs a < b.
void collect_pairs(const IndexedRelation& r, const IndexedRelation& s, std::uint64_t c,
                   const SsjOptions& options, OutputSet& out) {
  OutputSet joined = two_path_join(r, s, plan_for(r, s, options), true, options.join);
  for (std::size_t i = 0; i < joined.size(); ++i) {
    auto t = joined.tuple(i);
    if (t[0] != t[1] && joined.count(i) >= c) {
      out.push_pair(std::min(t[0], t[1]), std::max(t[0], t[1]));
    }
  }
}

double subset_count(const SetFamily& light, std::uint64_t c) {
  double total = 0;
  for (ValueId a : light.active_sets()) total += binomial(light.set_size(a), c);
  return total;
}

// Light pairs through an inverted index keyed by c-subsets: every pair of
// sets sharing a c-subset overlaps in at least c elements.
void subset_pairs(const SetFamily& light, std::uint64_t c, std::uint64_t cap, OutputSet& out) {
  if (subset_count(light, c) > static_cast<double>(cap)) {
    throw ResourceError("c-subset enumeration exceeds the cap of " + std::to_string(cap));
  }
  const std::size_t stride = c + 1;
  std::vector<ValueId> records;
  std::vector<std::size_t> pick(c);
  for (ValueId a : light.active_sets()) {
    auto elems = light.elements(a);
    if (elems.size() < c) continue;
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    while (true) {
      for (std::size_t p : pick) records.push_back(elems[p]);
      records.push_back(a);
      // Next combination in lexicographic order.
      std::size_t i = c;
      while (i > 0 && pick[i - 1] == elems.size() - c + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < c; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  const std::size_t n = records.size() / stride;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) {
    return std::span<const ValueId>(records.data() + i * stride, stride);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    auto kx = key(x), ky = key(y);
    return std::lexicographical_compare(kx.begin(), kx.end(), ky.begin(), ky.end());
  });
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo + 1;
    auto k0 = key(order[lo]).first(c);
    while (hi < n && std::ranges::equal(key(order[hi]).first(c), k0)) ++hi;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = i + 1; j < hi; ++j) {
        ValueId a = records[order[i] * stride + c], b = records[order[j] * stride + c];
        out.push_pair(std::min(a, b), std::max(a, b));
      }
    }
    lo = hi;
  }
}

}  // namespace

OutputSet ssj_mmjoin(const SetFamily& sets, std::uint64_t c, const SsjOptions& options) {
  require_overlap(c);
  const IndexedRelation& idx = sets.index();
  OutputSet joined = two_path_join(idx, idx, plan_for(idx, idx, options), true, options.join);
  OutputSet out(2);
  for (std::size_t i = 0; i < joined.size(); ++i) {
    auto t = joined.tuple(i);
    if (t[0] < t[1] && joined.count(i) >= c) out.push_pair(t[0], t[1], joined.count(i));
  }
  return out;
}

std::vector<BoundaryCost> size_boundary_costs(const SetFamily& sets, std::uint64_t c) {
  require_overlap(c);
  std::vector<std::uint64_t> sizes;
  for (ValueId a : sets.active_sets()) sizes.push_back(sets.set_size(a));
  std::sort(sizes.begin(), sizes.end());
  const std::size_t m = sizes.size();

  std::vector<double> prefix(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + static_cast<double>(sizes[i]);
  // Heavy cost of the set at position i: sum over the others of min sizes.
  auto heavy_of = [&](std::size_t i) {
    std::size_t k = std::upper_bound(sizes.begin(), sizes.end(), sizes[i]) - sizes.begin();
    double s = static_cast<double>(sizes[i]);
    return prefix[k] + static_cast<double>(m - k) * s - s;
  };
  std::vector<double> heavy_suffix(m + 1, 0), light_prefix(m + 1, 0);
  for (std::size_t i = m; i-- > 0;) heavy_suffix[i] = heavy_suffix[i + 1] + heavy_of(i);
  for (std::size_t i = 0; i < m; ++i) light_prefix[i + 1] = light_prefix[i] + binomial(sizes[i], c);

  std::vector<BoundaryCost> out;
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0 && sizes[i] == sizes[i - 1]) continue;
    out.push_back({sizes[i], heavy_suffix[i], light_prefix[i]});
  }
  out.push_back({m == 0 ? 1 : sizes.back() + 1, 0, light_prefix[m]});
  return out;
}

std::uint64_t get_size_boundary(const SetFamily& sets, std::uint64_t c) {
  auto costs = size_boundary_costs(sets, c);
  const BoundaryCost* best = &costs.front();
  for (const auto& cand : costs) {
    if (cand.total() < best->total()) best = &cand;
  }
  return best->boundary;
}

OutputSet ssj_size_aware(const SetFamily& sets, std::uint64_t c, const SsjOptions& options) {
  require_overlap(c);
  const std::uint64_t x = get_size_boundary(sets, c);
  const auto active = sets.active_sets();
  OutputSet out(2);
  for (ValueId h : active) {
    if (sets.set_size(h) < x) continue;
    for (ValueId r : active) {
      if (r == h || sets.set_size(r) < c) continue;
      if (merge_overlap(sets.elements(h), sets.elements(r)) >= c) {
        out.push_pair(std::min(r, h), std::max(r, h));
      }
    }
  }
  SetFamily light = sets.restrict([&](ValueId a) {
    auto n = sets.set_size(a);
    return n >= c && n < x;
  });
  subset_pairs(light, c, options.subset_cap, out);
  out.canonicalize();
  return out;
}

const char* to_string(LightMethod m) {
  switch (m) {
    case LightMethod::None: return "none";
    case LightMethod::PrefixTree: return "prefix-tree";
    case LightMethod::Subsets: return "subsets";
    case LightMethod::MatrixMultiply: return "mmjoin";
  }
  return "?";
}

SsjPlusResult ssj_size_aware_pp(const SetFamily& sets, std::uint64_t c,
                                std::size_t prefix_depth_cap, const SsjOptions& options) {
  require_overlap(c);
  SsjPlusResult result;
  result.boundary = get_size_boundary(sets, c);
  const std::uint64_t x = result.boundary;

  SetFamily heavy = sets.restrict([&](ValueId a) { return sets.set_size(a) >= x; });
  if (heavy.relation().size() > 0) {
    collect_pairs(sets.index(), heavy.index(), c, options, result.pairs);
  }

  SetFamily light = sets.restrict([&](ValueId a) {
    auto n = sets.set_size(a);
    return n >= c && n < x;
  });
  if (light.relation().size() > 0) {
    if (prefix_depth_cap > 0) {
      result.light_method = LightMethod::PrefixTree;
      PrefixTree tree(light, light, c, prefix_depth_cap);
      tree.run([&](ValueId a, std::span<const ValueId> matches) {
        for (ValueId b : matches) {
          if (a < b) result.pairs.push_pair(a, b);
        }
      });
      result.ops = tree.ops();
    } else {
      const IndexedRelation& li = light.index();
      std::uint64_t n = li.size();
      std::uint64_t join = full_join_size(li, li);
      std::uint64_t est = estimate_output_size(li.left_domain(), join, n).estimate;
      if (join > est || subset_count(light, c) > static_cast<double>(options.subset_cap)) {
        result.light_method = LightMethod::MatrixMultiply;
        collect_pairs(li, li, c, options, result.pairs);
      } else {
        result.light_method = LightMethod::Subsets;
        subset_pairs(light, c, options.subset_cap, result.pairs);
      }
    }
  }
  result.pairs.canonicalize();
  return result;
}

std::vector<RankedPair> ssj_ordered(const SetFamily& sets, std::uint64_t c,
                                    const SsjOptions& options) {
  OutputSet pairs = ssj_mmjoin(sets, c, options);
  std::vector<RankedPair> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.push_back({pairs.tuple(i)[0], pairs.tuple(i)[1], pairs.count(i)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedPair& x, const RankedPair& y) { return x.overlap > y.overlap; });
  return out;
}

}  // namespace mmjoin
