#include "mmjoin/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mmjoin/error.hpp"

namespace mmjoin {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

void BenchRecord::set_plan(const ThresholdPlan& plan) {
  strategy = to_string(plan.strategy);
  delta1 = plan.strategy == Strategy::Partitioned ? plan.delta1 : 0;
  delta2 = plan.strategy == Strategy::Partitioned ? plan.delta2 : 0;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRecord> records, bool header) {
  if (header) out << kBenchCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.dataset << ',' << r.query << ',' << r.method << ',' << r.wall_nanos << ','
        << r.output_size << ',' << r.delta1 << ',' << r.delta2 << ',' << r.strategy << '\n';
  }
}

std::vector<BenchRecord> read_bench_csv(std::istream& in) {
  std::vector<BenchRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != kBenchCsvHeader) throw ParseError(line_no, "unexpected CSV header");
      seen_header = true;
      continue;
    }
    auto f = split_csv(line);
    if (f.size() != 8) throw ParseError(line_no, "expected 8 fields");
    BenchRecord r;
    r.dataset = f[0];
    r.query = f[1];
    r.method = f[2];
    r.wall_nanos = parse_u64(f[3], line_no, "wall_nanos");
    r.output_size = parse_u64(f[4], line_no, "output_size");
    r.delta1 = parse_u64(f[5], line_no, "delta1");
    r.delta2 = parse_u64(f[6], line_no, "delta2");
    r.strategy = f[7];
    records.push_back(std::move(r));
  }
  return records;
}

std::uint64_t timed_nanos(const std::function<void()>& fn, int runs) {
  if (runs < 3) throw std::invalid_argument("need at least 3 runs");
  std::vector<std::uint64_t> times;
  for (int i = 0; i < runs; ++i) {
    auto start = std::chrono::steady_clock::now();
    fn();
    auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now() - start);
    times.push_back(static_cast<std::uint64_t>(ns.count()));
  }
  std::sort(times.begin(), times.end());
  std::uint64_t sum = 0;
  for (std::size_t i = 1; i + 1 < times.size(); ++i) sum += times[i];
  return sum / (times.size() - 2);
}

std::vector<Speedup> speedups(std::span<const BenchRecord> records) {
  std::map<std::pair<std::string, std::string>, std::vector<const BenchRecord*>> groups;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& r : records) {
    auto key = std::make_pair(r.dataset, r.query);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<Speedup> out;
  for (const auto& key : order) {
    const auto& rows = groups[key];
    const BenchRecord* base = rows.front();
    for (const auto* r : rows) {
      if (r->method == "fulljoin") {
        base = r;
        break;
      }
    }
    for (const auto* r : rows) {
      double ratio = r->wall_nanos == 0 ? 1.0
                                        : static_cast<double>(base->wall_nanos) /
                                              static_cast<double>(r->wall_nanos);
      out.push_back({key.first, key.second, r->method, base->method, ratio});
    }
  }
  return out;
}

std::string format_speedups(std::span<const Speedup> rows) {
  if (rows.empty()) return "no records\n";
  std::ostringstream out;
  char buf[64];
  for (const auto& s : rows) {
    std::snprintf(buf, sizeof buf, "%.2f", s.ratio);
    out << s.dataset << '\t' << s.query << '\t' << s.method << "\tspeedup vs " << s.baseline
        << ": " << buf << "x\n";
  }
  return out.str();
}

}  // namespace mmjoin
