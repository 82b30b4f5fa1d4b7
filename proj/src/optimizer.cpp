#include "mmjoin/optimizer.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mmjoin/error.hpp"

namespace mmjoin {

namespace {

using Clock = std::chrono::steady_clock;

double nanos_since(Clock::time_point start, std::size_t ops) {
  double ns = std::chrono::duration<double, std::nano>(Clock::now() - start).count();
  return ns / static_cast<double>(std::max<std::size_t>(ops, 1));
}

std::uint64_t clamp_degree(double d, std::uint64_t n) {
  if (!(d >= 1.0)) return 1;
  double cap = static_cast<double>(std::max<std::uint64_t>(n, 1));
  return static_cast<std::uint64_t>(std::min(std::floor(d), cap));
}

std::uint64_t relation_size(const DegreeStats& stats) {
  return stats.left.degree_mass(stats.left.max_degree());
}

}  // namespace

void CostConstants::validate() const {
  if (!(sequential_access > 0 && allocation > 0 && random_insert > 0 && cores > 0)) {
    throw std::invalid_argument("cost constants must be strictly positive");
  }
}

CostConstants CostConstants::measure(unsigned cores) {
  CostConstants c;
  c.cores = cores;
  std::mt19937_64 rng(1);

  constexpr std::size_t kScan = std::size_t{1} << 22;
  std::vector<std::uint32_t> data(kScan);
  std::iota(data.begin(), data.end(), 0u);
  auto start = Clock::now();
  volatile std::uint64_t sink = std::accumulate(data.begin(), data.end(), std::uint64_t{0});
  c.sequential_access = nanos_since(start, kScan);

  constexpr std::size_t kAllocs = std::size_t{1} << 16;
  std::vector<std::unique_ptr<std::array<char, 32>>> blocks;
  blocks.reserve(kAllocs);
  start = Clock::now();
  for (std::size_t i = 0; i < kAllocs; ++i) blocks.push_back(std::make_unique<std::array<char, 32>>());
  c.allocation = nanos_since(start, kAllocs);
  blocks.clear();

  constexpr std::size_t kInserts = std::size_t{1} << 20;
  std::vector<std::uint32_t> slots(std::size_t{1} << 22, 0);
  std::vector<std::uint32_t> index(kInserts);
  for (auto& i : index) i = static_cast<std::uint32_t>(rng() & (slots.size() - 1));
  start = Clock::now();
  for (std::uint32_t i : index) ++slots[i];
  c.random_insert = nanos_since(start, kInserts);
  sink = sink + slots[index[0]];

  // Timer granularity can report zero on very fast machines.
  c.sequential_access = std::max(c.sequential_access, 0.01);
  c.allocation = std::max(c.allocation, 0.01);
  c.random_insert = std::max(c.random_insert, 0.01);
  return c;
}

OutputEstimate estimate_output_size(std::uint64_t dom_x, std::uint64_t out_join, std::uint64_t n) {
  n = std::max<std::uint64_t>(n, 1);
  long double ratio = static_cast<long double>(out_join) / static_cast<long double>(n);
  long double lower = std::max<long double>(static_cast<long double>(dom_x), ratio * ratio);
  long double upper = std::min<long double>(static_cast<long double>(dom_x) * dom_x,
                                            static_cast<long double>(out_join));
  OutputEstimate e;
  e.lower = static_cast<std::uint64_t>(std::ceil(lower));
  e.upper = static_cast<std::uint64_t>(upper);
  long double mean = std::ceil(std::sqrt(lower * upper));
  if (e.upper >= 1) {
    mean = std::clamp<long double>(mean, 1.0L, static_cast<long double>(e.upper));
  }
  e.estimate = static_cast<std::uint64_t>(mean);
  return e;
}

std::pair<std::uint64_t, std::uint64_t> closed_form_thresholds(std::uint64_t n,
                                                               std::uint64_t out_est) {
  n = std::max<std::uint64_t>(n, 1);
  out_est = std::max<std::uint64_t>(out_est, 1);
  double nd = static_cast<double>(n), od = static_cast<double>(out_est);
  auto clamp = [n](double v) {
    return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::ceil(v - 1e-9)), 1, n);
  };
  if (out_est <= n) {
    return {clamp(std::cbrt(od)), clamp(nd / std::pow(od, 2.0 / 3.0))};
  }
  std::uint64_t d = clamp(std::cbrt(2.0 * nd * nd / (nd + od)));
  return {d, d};
}

TwoPathCostModel::TwoPathCostModel(const DegreeStats& r, const DegreeStats& s, std::uint64_t dom_x,
                                   std::uint64_t out_join, const CostConstants& consts,
                                   const CalibrationTable& table)
    : r_(r),
      s_(s),
      dom_x_(dom_x),
      out_join_(out_join),
      n_(std::max<std::uint64_t>({relation_size(r), relation_size(s), 1})),
      consts_(consts),
      table_(table) {
  consts_.validate();
  out_est_ = std::max<std::uint64_t>(estimate_output_size(dom_x, out_join, n_).estimate, 1);
}

ModeledCost TwoPathCostModel::evaluate(double delta1) const {
  ModeledCost cost;
  cost.delta1 = clamp_degree(delta1, n_);
  cost.delta2 = clamp_degree(static_cast<double>(n_) * delta1 / static_cast<double>(out_est_), n_);

  const double dom_x = static_cast<double>(dom_x_);
  cost.light = consts_.random_insert * static_cast<double>(s_.sum_y(cost.delta1)) +
               consts_.random_insert * static_cast<double>(r_.sum_x(cost.delta2)) +
               consts_.allocation * dom_x +
               consts_.sequential_access * static_cast<double>(s_.cdfx(cost.delta1)) * dom_x;

  double u = static_cast<double>(r_.left.domain() - r_.count_x(cost.delta2));
  double v = static_cast<double>(s_.right.domain() - s_.count_y(cost.delta1));
  double w = static_cast<double>(s_.left.domain() - s_.count_x(cost.delta2));
  if (u > 0 && v > 0 && w > 0) {
    cost.heavy = estimate_runtime(table_, u, v, w, consts_.cores) +
                 consts_.allocation * (u * v + u * w);
  }
  return cost;
}

ThresholdPlan optimize_thresholds(const DegreeStats& r, const DegreeStats& s, std::uint64_t dom_x,
                                  std::uint64_t out_join, const CostConstants& consts,
                                  const CalibrationTable& table, double step) {
  if (!(step > 0.0 && step < 1.0)) throw std::invalid_argument("sweep step must be in (0, 1)");
  if (table.empty()) {
    throw CalibrationError("empty calibration table; run `mmjoin calibrate` first");
  }
  TwoPathCostModel model(r, s, dom_x, out_join, consts, table);
  const std::uint64_t n = model.n();
  if (out_join <= kFullJoinFactor * n) return ThresholdPlan::full_join();

  double delta1 = static_cast<double>(n);
  ModeledCost current = model.evaluate(delta1);
  ModeledCost previous = current;
  std::uint64_t iterations = 0;
  while (true) {
    if (current.delta1 == 1) break;  // floor reached while still improving
    previous = current;
    delta1 = std::max(1.0, delta1 * (1.0 - step));
    ++iterations;
    current = model.evaluate(delta1);
    // Equal-cost plateaus (no degree between successive thresholds) do not
    // stop the sweep; only a strict increase does.
    if (current.total() > previous.total()) {
      current = previous;
      break;
    }
  }

  ThresholdPlan plan = ThresholdPlan::partitioned(current.delta1, current.delta2);
  plan.modeled_light_cost = current.light;
  plan.modeled_heavy_cost = current.heavy;
  plan.iterations = iterations;
  return plan;
}

ThresholdPlan optimize_thresholds(const IndexedRelation& r, const IndexedRelation& s,
                                  const CostConstants& consts, const CalibrationTable& table,
                                  double step) {
  return optimize_thresholds(degree_stats(r), degree_stats(s),
                             std::max(r.left_domain(), s.left_domain()), full_join_size(r, s),
                             consts, table, step);
}

ThresholdPlan closed_form_plan(const IndexedRelation& r, const IndexedRelation& s) {
  std::uint64_t n = std::max<std::uint64_t>({r.size(), s.size(), 1});
  std::uint64_t out_join = full_join_size(r, s);
  if (out_join <= kFullJoinFactor * n) return ThresholdPlan::full_join();
  auto est = estimate_output_size(std::max(r.left_domain(), s.left_domain()), out_join, n);
  auto [d1, d2] = closed_form_thresholds(n, std::max<std::uint64_t>(est.estimate, 1));
  return ThresholdPlan::partitioned(d1, d2);
}

}  // namespace mmjoin
