// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when a criterion fails that is not listed in --allow-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mmjoin/apps.hpp"
#include "mmjoin/joinproject.hpp"
#include "mmjoin/matmul.hpp"
#include "mmjoin/optimizer.hpp"
#include "mmjoin/relation.hpp"
#include "oracles.hpp"

using namespace mmjoin;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::vector<Count>> rows_of(const CountMatrix& m) {
  std::vector<std::vector<Count>> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
  return out;
}

std::string show(const std::vector<std::vector<Count>>& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m[i].size(); ++j) os << (j ? "," : "") << m[i][j];
    os << "]";
  }
  os << "]";
  return os.str();
}

Outcome worked_example() {
  Outcome o;
  IndexedRelation r = fixture::indexed(fixture::example_r());
  IndexedRelation s = fixture::indexed(fixture::example_s());
  auto [rp, sp] = partition_two_path(r, s, 2, 2);
  oracle::Pairs r_heavy{{4, 4}, {4, 6}, {5, 4}, {5, 5}, {5, 6}, {6, 4}, {6, 5}};
  oracle::Pairs s_heavy{{4, 4}, {4, 5}, {5, 4}, {5, 5}, {5, 6}, {6, 5}, {6, 6}};
  bool part = oracle::tuples_of(rp.heavy) == r_heavy && oracle::tuples_of(sp.heavy) == s_heavy;

  TwoPathClassifier cls(r, s, 2, 2);
  HeavyMatrices hm = build_heavy_matrices(r, s, cls);
  std::vector<std::vector<Count>> m1{{1, 0, 1}, {1, 1, 1}, {1, 1, 0}};
  std::vector<std::vector<Count>> m2{{1, 1, 0}, {1, 1, 1}, {0, 1, 1}};
  bool mats = rows_of(hm.m1) == m1 && rows_of(hm.m2) == m2;

  auto m = rows_of(multiply_counts(hm.m1, hm.m2));
  std::vector<std::vector<Count>> figure{{1, 2, 1}, {2, 3, 2}, {2, 2, 3}};
  bool product = m == figure;

  o.pass = part && mats && product;
  o.detail = std::string("partition ") + (part ? "ok" : "differs") + ", M1/M2 " +
             (mats ? "ok" : "differ") + ", M = " + show(m) + " vs figure " + show(figure);
  return o;
}

Outcome two_path_equivalence() {
  Outcome o;
  std::mt19937_64 rng(1001);
  std::size_t mismatches = 0, runs = 0;
  for (int inst = 0; inst < 200; ++inst) {
    std::size_t n = 50 + rng() % 4951;
    std::size_t nx = 10 + rng() % 600, ny = 5 + rng() % 300, nz = 10 + rng() % 600;
    auto rp = oracle::random_pairs(rng, n, nx, ny);
    auto sp = oracle::random_pairs(rng, 50 + rng() % 4951, nz, ny);
    IndexedRelation r = fixture::indexed(rp, nx, ny), s = fixture::indexed(sp, nz, ny, "S");
    auto want = oracle::packed(oracle::two_path_bucketed(rp, sp));
    std::uint64_t nmax = std::max(rp.size(), sp.size());
    for (int p = 0; p < 20; ++p) {
      // Log-uniform thresholds in [1, N].
      std::uniform_real_distribution<double> e(0, std::log(static_cast<double>(nmax)));
      auto d1 = static_cast<std::uint64_t>(std::exp(e(rng)));
      auto d2 = static_cast<std::uint64_t>(std::exp(e(rng)));
      OutputSet got = two_path_join(r, s, ThresholdPlan::partitioned(std::max<std::uint64_t>(d1, 1),
                                                                     std::max<std::uint64_t>(d2, 1)));
      ++runs;
      if (got.packed_pairs() != want) ++mismatches;
    }
  }
  o.pass = mismatches == 0;
  o.detail = std::to_string(runs) + " runs, " + std::to_string(mismatches) + " mismatches";
  return o;
}

Outcome star_equivalence() {
  Outcome o;
  std::mt19937_64 rng(1002);
  std::size_t mismatches = 0, k2_mismatches = 0;
  for (int inst = 0; inst < 100; ++inst) {
    std::size_t k = 2 + inst % 3, ny = 5 + rng() % 40;
    std::vector<oracle::Pairs> raw;
    std::vector<IndexedRelation> rels;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t nx = 5 + rng() % 60;
      std::size_t cap = k == 4 ? 120 : k == 3 ? 250 : 500;
      raw.push_back(oracle::random_pairs(rng, 10 + rng() % (cap - 9), nx, ny));
      rels.push_back(fixture::indexed(raw.back(), nx, ny));
    }
    std::vector<const IndexedRelation*> ptrs;
    for (auto& r : rels) ptrs.push_back(&r);
    auto want = oracle::star(raw);
    std::uint64_t d1 = 1 + rng() % 8, d2 = 1 + rng() % 8;
    OutputSet got = star_join(ptrs, d1, d2, true);
    std::map<std::vector<ValueId>, std::uint64_t> got_map;
    for (std::size_t i = 0; i < got.size(); ++i) {
      got_map[{got.tuple(i).begin(), got.tuple(i).end()}] = got.count(i);
    }
    if (got_map != want) ++mismatches;
    if (k == 2) {
      OutputSet path = two_path_join(rels[0], rels[1], ThresholdPlan::partitioned(d1, d2));
      OutputSet plain = star_join(ptrs, d1, d2);
      if (!plain.same_tuples(path)) ++k2_mismatches;
    }
  }
  o.pass = mismatches == 0 && k2_mismatches == 0;
  o.detail = "100 instances, " + std::to_string(mismatches) + " oracle mismatches, " +
             std::to_string(k2_mismatches) + " k=2 vs two-path mismatches";
  return o;
}

Outcome count_exactness() {
  Outcome o;
  std::mt19937_64 rng(1003);
  std::size_t bad_counts = 0, bad_sums = 0;
  for (int inst = 0; inst < 100; ++inst) {
    std::size_t nx = 10 + rng() % 200, ny = 5 + rng() % 100, nz = 10 + rng() % 200;
    auto rp = oracle::random_pairs(rng, 20 + rng() % 2000, nx, ny);
    auto sp = oracle::random_pairs(rng, 20 + rng() % 2000, nz, ny);
    IndexedRelation r = fixture::indexed(rp, nx, ny), s = fixture::indexed(sp, nz, ny, "S");
    std::uint64_t d1 = 1 + rng() % 30, d2 = 1 + rng() % 30;
    OutputSet got = two_path_join(r, s, ThresholdPlan::partitioned(d1, d2), true);
    // Recount witnesses per pair directly from the tuple lists.
    std::map<ValueId, std::set<ValueId>> r_by_x, s_by_z;
    for (auto [a, b] : rp) r_by_x[a].insert(b);
    for (auto [c, b] : sp) s_by_z[c].insert(b);
    for (std::size_t i = 0; i < got.size(); ++i) {
      const auto& bx = r_by_x[got.tuple(i)[0]];
      const auto& bz = s_by_z[got.tuple(i)[1]];
      std::uint64_t w = 0;
      for (ValueId b : bx) w += bz.count(b);
      if (w != got.count(i)) ++bad_counts;
    }
    if (got.total_count() != oracle::full_join_size(rp, sp)) ++bad_sums;
  }
  o.pass = bad_counts == 0 && bad_sums == 0;
  o.detail = "100 instances, " + std::to_string(bad_counts) + " wrong counts, " +
             std::to_string(bad_sums) + " wrong sums";
  return o;
}

oracle::PairCounts as_map(const OutputSet& out) {
  oracle::PairCounts m;
  for (std::size_t i = 0; i < out.size(); ++i) m[{out.tuple(i)[0], out.tuple(i)[1]}] = 1;
  return m;
}

Outcome ssj_agreement() {
  Outcome o;
  std::mt19937_64 rng(1004);
  std::size_t mismatches = 0, errors = 0, runs = 0;
  for (int inst = 0; inst < 50; ++inst) {
    auto sets = oracle::random_family(rng, 200, 25, 30 + rng() % 150);
    SetFamily f = SetFamily::from_sets(sets);
    for (std::uint64_t c : {1u, 2u, 3u}) {
      ++runs;
      auto want = oracle::ssj(sets, c);
      std::set<std::pair<ValueId, ValueId>> want_keys = oracle::keys(want);
      try {
        bool ok = oracle::as_counts(ssj_mmjoin(f, c)) == want;
        ok = ok && oracle::keys(as_map(ssj_size_aware(f, c))) == want_keys;
        ok = ok && oracle::keys(as_map(ssj_size_aware_pp(f, c).pairs)) == want_keys;
        ok = ok && oracle::keys(as_map(ssj_size_aware_pp(f, c, 0).pairs)) == want_keys;
        if (!ok) ++mismatches;
      } catch (const std::exception&) {
        ++errors;
      }
    }
  }

  SetFamily probe = SetFamily::from_sets(fixture::prefix_probe());
  SetFamily lists = SetFamily::from_sets(fixture::prefix_lists());
  auto noop = [](ValueId, std::span<const ValueId>) {};
  PrefixTree tree(probe, lists, 2);
  tree.run(noop, true);
  std::uint64_t reuse = 0;
  for (auto [set, ops] : tree.ops_per_set()) {
    if (set == 1 || set == 2) reuse += ops;
  }
  tree.run(noop, false);
  std::uint64_t cold = 0;
  for (auto [set, ops] : tree.ops_per_set()) {
    if (set == 1 || set == 2) cold += ops;
  }

  bool walk = reuse == 9 && cold == 18;
  o.pass = mismatches == 0 && errors == 0 && walk;
  o.detail = std::to_string(runs) + " runs, " + std::to_string(mismatches) + " mismatches, " +
             std::to_string(errors) + " errors; walkthrough ops with reuse " +
             std::to_string(reuse) + " (want 9), without " + std::to_string(cold) + " (want 18)";
  return o;
}

Outcome scj_equivalence() {
  Outcome o;
  std::mt19937_64 rng(1005);
  std::size_t mismatches = 0, total = 0;
  for (int inst = 0; inst < 50; ++inst) {
    auto sets = oracle::random_family(rng, 150, 3 + rng() % 10, 8 + rng() % 30);
    auto want = oracle::scj(sets);
    total += want.size();
    if (oracle::keys(as_map(scj_join_project(SetFamily::from_sets(sets)))) != want) ++mismatches;
  }
  o.pass = mismatches == 0;
  o.detail = "50 families, " + std::to_string(total) + " containments, " +
             std::to_string(mismatches) + " mismatches";
  return o;
}

Outcome estimator_sandwich() {
  Outcome o;
  std::mt19937_64 rng(1006);
  std::size_t violations = 0, checked = 0;
  for (int inst = 0; inst < 100; ++inst) {
    std::size_t nx = 10 + rng() % 300, ny = 5 + rng() % 100, nz = 10 + rng() % 300;
    Relation r0 = Relation::from_pairs("R", oracle::random_pairs(rng, 20 + rng() % 3000, nx, ny), nx, ny);
    Relation s0 = Relation::from_pairs("S", oracle::random_pairs(rng, 20 + rng() % 3000, nz, ny), nz, ny);
    auto [rr, sr] = semi_join_reduce(r0, s0);
    if (rr.empty()) continue;
    ++checked;
    IndexedRelation r(rr), s(sr);
    std::uint64_t n = std::max(r.size(), s.size());
    std::uint64_t out_join = full_join_size(r, s);
    std::uint64_t out = oracle::two_path_bucketed(oracle::tuples_of(rr), oracle::tuples_of(sr)).size();
    auto est = estimate_output_size(std::max(r.left_domain(), s.left_domain()), out_join, n);
    bool ok = est.lower <= out && out <= est.upper &&
              static_cast<double>(out_join) <= static_cast<double>(n) * std::sqrt(static_cast<double>(out));
    if (!ok) ++violations;
  }
  o.pass = violations == 0 && checked > 0;
  o.detail = std::to_string(checked) + " reduced instances, " + std::to_string(violations) + " violations";
  return o;
}

struct CommunitySpec {
  std::size_t nodes;
  std::size_t communities;
  double p;
};

Outcome optimizer_quality() {
  Outcome o;
  auto t0 = Clock::now();
  CalibrationTable table = calibrate();
  CostConstants consts = CostConstants::measure();
  double calib = seconds_since(t0);
  std::mt19937_64 rng(1008);
  std::size_t worse = 0, over_iter = 0, fulljoin = 0;
  double worst_ratio = 0;
  for (int inst = 0; inst < 20; ++inst) {
    std::uniform_real_distribution<double> le(std::log(1.2e4), std::log(9e4));
    double edges = std::exp(le(rng));
    std::size_t k = 1 + rng() % 8;
    double p = 0.3 + 0.6 * std::uniform_real_distribution<double>(0, 1)(rng);
    auto nodes = static_cast<std::size_t>(std::sqrt(edges * static_cast<double>(k) / p));
    IndexedRelation g(generate_community_graph(nodes, k, p, 5000 + inst));
    DegreeStats st = degree_stats(g);
    std::uint64_t dom = g.left_domain(), out_join = full_join_size(g, g);
    ThresholdPlan plan = optimize_thresholds(st, st, dom, out_join, consts, table);
    if (plan.strategy == Strategy::FullJoin) {
      ++fulljoin;
      continue;
    }
    TwoPathCostModel model(st, st, dom, out_join, consts, table);
    double n = static_cast<double>(model.n());
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 50; ++i) {
      double d1 = std::exp(std::log(n) * i / 49.0);
      best = std::min(best, model.evaluate(d1).total());
    }
    double ratio = plan.modeled_total() / best;
    worst_ratio = std::max(worst_ratio, ratio);
    if (ratio > 1.5) ++worse;
    auto bound = static_cast<std::uint64_t>(std::ceil(std::log(n) / std::log(1 / 0.95))) + 1;
    if (plan.iterations > bound) ++over_iter;
  }
  o.pass = worse == 0 && over_iter == 0;
  std::ostringstream os;
  os << "20 graphs (" << fulljoin << " full join), worst cost ratio " << worst_ratio << ", "
     << worse << " above 1.5, " << over_iter << " over the iteration bound, calibration "
     << calib << " s";
  o.detail = os.str();
  return o;
}

std::uint64_t median_nanos(const std::function<void()>& fn) {
  std::vector<std::uint64_t> t;
  for (int i = 0; i < 5; ++i) {
    auto t0 = Clock::now();
    fn();
    t.push_back(static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count()));
  }
  std::sort(t.begin(), t.end());
  return t[2];
}

Outcome performance_smoke() {
  Outcome o;
  // One dense community: about 1.1e5 edges over 350 nodes.
  IndexedRelation g(generate_community_graph(350, 1, 0.9, 9));
  std::uint64_t n = g.size(), out_join = full_join_size(g, g);
  CalibrationTable table = calibrate();
  ThresholdPlan plan = optimize_thresholds(g, g, CostConstants::measure(), table);
  std::uint64_t out = 0;
  std::uint64_t mm = median_nanos([&] { out = two_path_join(g, g, plan).size(); });
  std::uint64_t full = median_nanos([&] { full_join_dedup(g, g); });
  bool shape = out_join >= 20 * out && out_join >= 20 * n;
  double ratio = static_cast<double>(mm) / static_cast<double>(full);
  o.pass = shape && ratio <= 0.7;
  std::ostringstream os;
  os << "N " << n << ", OUT " << out << ", OUT_join " << out_join << ", plan "
     << to_string(plan.strategy) << " d1 " << plan.delta1 << " d2 " << plan.delta2 << ", mmjoin "
     << mm / 1e6 << " ms, full join " << full / 1e6 << " ms, ratio " << ratio;
  o.detail = os.str();
  return o;
}

Outcome bsi_checks() {
  Outcome o;
  std::mt19937_64 rng(1010);
  auto rs = oracle::random_family(rng, 400, 30, 500);
  auto ss = oracle::random_family(rng, 400, 30, 500);
  SetFamily r = SetFamily::from_sets(rs), s = SetFamily::from_sets(ss);
  std::vector<std::pair<ValueId, ValueId>> batch;
  for (int i = 0; i < 1000; ++i) batch.emplace_back(rng() % rs.size(), rng() % ss.size());
  auto answers = bsi_answer_batch(r.index(), s.index(), batch);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& x = rs[batch[i].first];
    const auto& y = ss[batch[i].second];
    std::vector<ValueId> common;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
    if (answers[i] != (common.empty() ? BsiAnswer::Disjoint : BsiAnswer::Intersecting)) ++wrong;
  }
  std::uint64_t size = bsi_batch_size(1000, 1e6);

  // Dense workload: sets are nodes of community graphs, costs are measured.
  IndexedRelation g(generate_community_graph(2000, 20, 0.5, 11));
  std::vector<std::pair<ValueId, ValueId>> pairs;
  for (int i = 0; i < 4096; ++i) pairs.emplace_back(rng() % 2000, rng() % 2000);
  std::map<std::size_t, double> memo;
  auto cost = [&](std::size_t c) {
    auto it = memo.find(c);
    if (it != memo.end()) return it->second;
    std::span<const std::pair<ValueId, ValueId>> part(pairs.data(), std::min(c, pairs.size()));
    double sec = static_cast<double>(median_nanos([&] { bsi_answer_batch(g, g, part); })) / 1e9;
    return memo[c] = sec;
  };
  // Arrivals at twice the rate one-at-a-time processing sustains.
  BsiWorkload w = uniform_bsi_workload(pairs, 2.0 / cost(1));
  std::vector<std::size_t> sizes{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
  std::vector<double> delays;
  for (std::size_t c : sizes) delays.push_back(bsi_simulate(w, c, cost).average_delay);
  auto best = static_cast<std::size_t>(std::min_element(delays.begin(), delays.end()) - delays.begin());
  bool interior = best > 0 && best + 1 < sizes.size();

  o.pass = wrong == 0 && size == 251189 && interior;
  std::ostringstream os;
  os << "1000 queries, " << wrong << " wrong; batch size " << size << "; best C " << sizes[best]
     << " (delay " << delays[best] << " s vs " << delays.front() << " at C=1, " << delays.back()
     << " at C=" << sizes.back() << ")";
  o.detail = os.str();
  return o;
}

Outcome kernel_equivalence() {
  Outcome o;
  std::mt19937_64 rng(1011);
  std::size_t mismatches = 0, nondeterministic = 0;
  for (int inst = 0; inst < 200; ++inst) {
    std::size_t u = 1 + rng() % 64, v = 1 + rng() % 64, w = 1 + rng() % 64;
    CountMatrix a(u, v), b(v, w);
    std::vector<std::vector<std::uint64_t>> ra(u, std::vector<std::uint64_t>(v)),
        rb(v, std::vector<std::uint64_t>(w));
    for (std::size_t i = 0; i < u; ++i)
      for (std::size_t j = 0; j < v; ++j) a.at(i, j) = static_cast<Count>(ra[i][j] = rng() % 4);
    for (std::size_t i = 0; i < v; ++i)
      for (std::size_t j = 0; j < w; ++j) b.at(i, j) = static_cast<Count>(rb[i][j] = rng() % 4);
    auto want = oracle::matmul(ra, rb);
    CountMatrix first;
    for (unsigned cores : {1u, 2u, 3u, 4u}) {
      MultiplyOptions opt;
      opt.cores = cores;
      opt.block = 8 + rng() % 57;
      CountMatrix c = multiply_counts(a, b, opt);
      bool same = c.rows() == u && c.cols() == w;
      for (std::size_t i = 0; same && i < u; ++i)
        for (std::size_t j = 0; same && j < w; ++j) same = c.at(i, j) == want[i][j];
      if (!same) ++mismatches;
      if (cores == 1) {
        first = c;
      } else if (!(c == first)) {
        ++nondeterministic;
      }
    }
  }
  o.pass = mismatches == 0 && nondeterministic == 0;
  o.detail = "200 triples x 4 core counts, " + std::to_string(mismatches) + " mismatches, " +
             std::to_string(nondeterministic) + " differing across cores";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0: no limit
  std::function<Outcome()> run;
};

std::set<int> parse_ids(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.insert(std::stoi(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> allowed, only;
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--allow-fail") {
      allowed = parse_ids(argv[i + 1]);
    } else if (flag == "--only") {
      only = parse_ids(argv[i + 1]);
    } else {
      std::fprintf(stderr, "usage: %s [--allow-fail 1,5] [--only 2,3]\n", argv[0]);
      return 2;
    }
  }

  std::vector<Criterion> criteria{
      {1, "worked two-path example", 1, worked_example},
      {2, "two-path oracle equivalence", 120, two_path_equivalence},
      {3, "star oracle equivalence", 120, star_equivalence},
      {4, "witness count exactness", 60, count_exactness},
      {5, "SSJ agreement and prefix reuse", 120, ssj_agreement},
      {6, "SCJ oracle equivalence", 60, scj_equivalence},
      {7, "output estimate bounds", 60, estimator_sandwich},
      {8, "optimizer quality", 300, optimizer_quality},
      {9, "two-path performance smoke", 0, performance_smoke},
      {10, "BSI answers, batch size and delay sweep", 120, bsi_checks},
      {11, "matmul kernel equivalence", 60, kernel_equivalence},
  };

  int blocking = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double sec = seconds_since(t0);
    bool in_time = c.limit_seconds == 0 || sec < c.limit_seconds;
    bool pass = o.pass && in_time;
    std::printf("%s [%d] %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), sec, in_time ? "" : ", over time limit");
    std::fflush(stdout);
    if (!pass && !allowed.count(c.id)) ++blocking;
  }
  return blocking == 0 ? 0 : 1;
}
