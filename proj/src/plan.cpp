#include "mmjoin/plan.hpp"

#include <sstream>
#include <stdexcept>

namespace mmjoin {

const char* to_string(Strategy s) { return s == Strategy::FullJoin ? "fulljoin" : "partitioned"; }

std::string to_tsv(const ThresholdPlan& plan) {
  std::ostringstream out;
  out << to_string(plan.strategy) << '\t' << plan.delta1 << '\t' << plan.delta2 << '\t'
      << plan.modeled_light_cost << '\t' << plan.modeled_heavy_cost << '\t' << plan.iterations;
  return out.str();
}

ThresholdPlan plan_from_tsv(const std::string& line) {
  std::istringstream in(line);
  std::string strategy;
  ThresholdPlan plan;
  if (!(in >> strategy >> plan.delta1 >> plan.delta2 >> plan.modeled_light_cost >>
        plan.modeled_heavy_cost >> plan.iterations)) {
    throw std::invalid_argument("malformed plan line: " + line);
  }
  if (strategy == "fulljoin") {
    plan.strategy = Strategy::FullJoin;
  } else if (strategy == "partitioned") {
    plan.strategy = Strategy::Partitioned;
  } else {
    throw std::invalid_argument("unknown strategy '" + strategy + "'");
  }
  return plan;
}

}  // namespace mmjoin
