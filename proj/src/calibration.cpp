#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "mmjoin/error.hpp"
#include "mmjoin/matmul.hpp"

namespace mmjoin {

namespace {

constexpr const char* kHeader = "# mmjoin-calibration v1";

CountMatrix random_binary(std::size_t n, std::mt19937_64& rng) {
  std::vector<Count> data(n * n);
  for (auto& x : data) x = static_cast<Count>(rng() & 1);
  return CountMatrix(n, n, std::move(data));
}

}  // namespace

void CalibrationTable::make_monotone() {
  std::map<unsigned, double> running;
  for (auto& [key, nanos] : entries_) {
    auto [it, inserted] = running.try_emplace(key.second, nanos);
    if (!inserted) {
      it->second = std::max(it->second, nanos);
      nanos = it->second;
    }
  }
}

void CalibrationTable::save(std::ostream& out) const {
  out << kHeader << '\n';
  for (const auto& [key, nanos] : entries_) {
    out << key.first << '\t' << key.second << '\t' << static_cast<std::uint64_t>(std::llround(nanos))
        << '\n';
  }
}

CalibrationTable CalibrationTable::load(std::istream& in) {
  CalibrationTable table;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line == kHeader) saw_header = true;
      continue;
    }
    std::istringstream fields(line);
    std::size_t dim = 0;
    unsigned cores = 0;
    double nanos = 0;
    if (!(fields >> dim >> cores >> nanos) || dim == 0 || cores == 0 || nanos < 0) {
      throw CalibrationError("calibration line " + std::to_string(line_no) +
                             ": expected `p<TAB>co<TAB>nanos`");
    }
    table.set(dim, cores, nanos);
  }
  if (!saw_header && !table.empty()) {
    throw CalibrationError("calibration file lacks version header '" + std::string(kHeader) + "'");
  }
  return table;
}

void CalibrationTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw CalibrationError("cannot write " + path);
  save(out);
}

CalibrationTable CalibrationTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CalibrationError("cannot read calibration file " + path);
  return load(in);
}

CalibrationConfig CalibrationConfig::wide() {
  CalibrationConfig config;
  config.probe_dims.clear();
  for (std::size_t p = 50; p <= 1000; p += 50) config.probe_dims.push_back(p);
  config.cores = {1, 2, 3, 4, 5};
  return config;
}

CalibrationTable calibrate(const CalibrationConfig& config) {
  if (config.probe_dims.empty() || config.cores.empty()) {
    throw CalibrationError("calibration needs at least one probe dimension and core count");
  }
  CalibrationTable table;
  std::mt19937_64 rng(config.seed);
  unsigned runs = std::max(3u, config.runs);
  for (std::size_t dim : config.probe_dims) {
    if (dim == 0 || 3 * dim * dim * sizeof(Count) > config.memory_budget) {
      throw CalibrationError("probe dimension " + std::to_string(dim) + " exceeds memory budget");
    }
    CountMatrix a, b;
    try {
      a = random_binary(dim, rng);
      b = random_binary(dim, rng);
    } catch (const std::bad_alloc&) {
      throw CalibrationError("allocation failed for probe dimension " + std::to_string(dim));
    }
    for (unsigned cores : config.cores) {
      std::vector<double> samples;
      for (unsigned r = 0; r < runs; ++r) {
        auto start = std::chrono::steady_clock::now();
        CountMatrix c = multiply_counts(a, b, {.cores = cores});
        auto stop = std::chrono::steady_clock::now();
        if (c.rows() != dim) throw CalibrationError("unexpected product shape");
        samples.push_back(std::chrono::duration<double, std::nano>(stop - start).count());
      }
      std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
      table.set(dim, cores, samples[samples.size() / 2]);
    }
  }
  table.make_monotone();
  return table;
}

double estimate_runtime(const CalibrationTable& table, double u, double v, double w,
                        unsigned cores) {
  if (table.empty()) throw CalibrationError("empty calibration table; run `mmjoin calibrate` first");
  double volume = u * v * w;
  if (volume <= 0) return 0.0;
  double side = std::cbrt(volume);

  // Nearest core count first, then the nearest probe among that core count's rows.
  unsigned best_cores = 0;
  for (const auto& [key, nanos] : table.entries()) {
    long diff = std::labs(static_cast<long>(key.second) - static_cast<long>(cores));
    long best = std::labs(static_cast<long>(best_cores) - static_cast<long>(cores));
    if (best_cores == 0 || diff < best) best_cores = key.second;
  }
  std::size_t best_dim = 0;
  double best_time = 0;
  for (const auto& [key, nanos] : table.entries()) {
    if (key.second != best_cores) continue;
    double diff = std::abs(static_cast<double>(key.first) - side);
    if (best_dim == 0 || diff < std::abs(static_cast<double>(best_dim) - side)) {
      best_dim = key.first;
      best_time = nanos;
    }
  }
  double p = static_cast<double>(best_dim);
  return best_time * volume / (p * p * p);
}

}  // namespace mmjoin
