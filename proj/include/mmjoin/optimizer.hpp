#pragma once

#include <cstdint>
#include <utility>

#include "mmjoin/matmul.hpp"
#include "mmjoin/plan.hpp"
#include "mmjoin/relation.hpp"

namespace mmjoin {

/// Machine constants of the cost model, all in nanoseconds.
struct CostConstants {
  double sequential_access = 0.3;  // one element of a sequential vector scan
  double allocation = 15.0;        // allocating 32 bytes
  double random_insert = 2.0;      // random access and insert into a vector
  unsigned cores = 1;

  void validate() const;
  /// Micro-benchmarks the three access patterns on this machine.
  static CostConstants measure(unsigned cores = 1);
};

/// Bounds on |OUT| of a reduced two-path instance:
///   max(dom_x, (out_join / N)^2) <= |OUT| <= min(dom_x^2, out_join)
/// and their geometric mean as the estimate.
struct OutputEstimate {
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
  std::uint64_t estimate = 0;
};

OutputEstimate estimate_output_size(std::uint64_t dom_x, std::uint64_t out_join, std::uint64_t n);

/// Minimizer of N*d1 + OUT*d2 + N^2 / (d2 * min(d1, d2)), i.e. thresholds
/// for an omega = 2 multiply, clamped to [1, N].
std::pair<std::uint64_t, std::uint64_t> closed_form_thresholds(std::uint64_t n, std::uint64_t out_est);

/// Default shrink per sweep step: delta1 is multiplied by (1 - step).
inline constexpr double kDefaultSweepStep = 0.05;
/// Full join is used when out_join <= kFullJoinFactor * N.
inline constexpr std::uint64_t kFullJoinFactor = 20;

/// Modeled light and heavy running times of one candidate plan.
struct ModeledCost {
  std::uint64_t delta1 = 1;
  std::uint64_t delta2 = 1;
  double light = 0;
  double heavy = 0;
  double total() const { return light + heavy; }
};

/// Cost of a partitioned two-path plan as a function of delta1, with
/// delta2 = N * delta1 / |OUT| tied to it. x statistics come from R, y and
/// z statistics from S.
class TwoPathCostModel {
 public:
  TwoPathCostModel(const DegreeStats& r, const DegreeStats& s, std::uint64_t dom_x,
                   std::uint64_t out_join, const CostConstants& consts, const CalibrationTable& table);

  ModeledCost evaluate(double delta1) const;

  std::uint64_t n() const { return n_; }
  std::uint64_t out_estimate() const { return out_est_; }
  std::uint64_t out_join() const { return out_join_; }

 private:
  const DegreeStats& r_;
  const DegreeStats& s_;
  std::uint64_t dom_x_;
  std::uint64_t out_join_;
  std::uint64_t n_;
  std::uint64_t out_est_;
  CostConstants consts_;
  const CalibrationTable& table_;
};

/// Geometric sweep of delta1 from N downward, stopping at the first
/// increase of modeled cost. Returns FullJoin when out_join <= 20 * N.
/// Throws CalibrationError on an empty table.
ThresholdPlan optimize_thresholds(const DegreeStats& r, const DegreeStats& s, std::uint64_t dom_x,
                                  std::uint64_t out_join, const CostConstants& consts,
                                  const CalibrationTable& table, double step = kDefaultSweepStep);

/// Convenience wrapper: stats, domain and full-join size from the relations.
ThresholdPlan optimize_thresholds(const IndexedRelation& r, const IndexedRelation& s,
                                  const CostConstants& consts, const CalibrationTable& table,
                                  double step = kDefaultSweepStep);

/// Closed-form plan seeded from the output estimate; needs no calibration.
ThresholdPlan closed_form_plan(const IndexedRelation& r, const IndexedRelation& s);

}  // namespace mmjoin
