#pragma once

#include <cstdint>
#include <string>

namespace mmjoin {

enum class Strategy { FullJoin, Partitioned };

/// Degree thresholds for a join-project evaluation. delta1 bounds the
/// degree of the projected-out (join) value, delta2 the degree of the
/// output values.
struct ThresholdPlan {
  Strategy strategy = Strategy::Partitioned;
  std::uint64_t delta1 = 1;
  std::uint64_t delta2 = 1;
  double modeled_light_cost = 0;
  double modeled_heavy_cost = 0;
  std::uint64_t iterations = 0;

  static ThresholdPlan full_join() { return ThresholdPlan{.strategy = Strategy::FullJoin}; }
  static ThresholdPlan partitioned(std::uint64_t d1, std::uint64_t d2) {
    return ThresholdPlan{.strategy = Strategy::Partitioned, .delta1 = d1, .delta2 = d2};
  }

  double modeled_total() const { return modeled_light_cost + modeled_heavy_cost; }
};

const char* to_string(Strategy s);

/// `strategy delta1 delta2 cost_light cost_heavy iterations`, tab separated.
std::string to_tsv(const ThresholdPlan& plan);
ThresholdPlan plan_from_tsv(const std::string& line);

}  // namespace mmjoin
