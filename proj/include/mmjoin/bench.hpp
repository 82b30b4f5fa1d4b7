#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mmjoin/plan.hpp"

namespace mmjoin {

inline constexpr const char* kBenchCsvHeader =
    "dataset,query,method,wall_nanos,output_size,delta1,delta2,strategy";

/// One timed evaluation of a query by one method.
struct BenchRecord {
  std::string dataset;
  std::string query;   // twopath, star-k, ssj-c, scj, bsi-C
  std::string method;  // mmjoin, fulljoin, sizeaware, sizeaware-pp, oracle
  std::uint64_t wall_nanos = 0;
  std::uint64_t output_size = 0;
  std::uint64_t delta1 = 0;
  std::uint64_t delta2 = 0;
  std::string strategy;

  void set_plan(const ThresholdPlan& plan);
  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records, bool header = true);
/// Throws ParseError on a missing header or malformed rows.
std::vector<BenchRecord> read_bench_csv(std::istream& in);

/// Runs fn `runs` times on a monotonic clock and returns the mean of the
/// runs left after dropping the fastest and the slowest (runs >= 3).
std::uint64_t timed_nanos(const std::function<void()>& fn, int runs = 5);

struct Speedup {
  std::string dataset;
  std::string query;
  std::string method;
  std::string baseline;
  double ratio = 1;  // baseline time / method time
};

/// Per (dataset, query): every method against fulljoin, or against the
/// group's first method when fulljoin is absent.
std::vector<Speedup> speedups(std::span<const BenchRecord> records);
std::string format_speedups(std::span<const Speedup> rows);

}  // namespace mmjoin
