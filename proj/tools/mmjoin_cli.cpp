// mmjoin: command-line front end for the join-project engine.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mmjoin/apps.hpp"
#include "mmjoin/bench.hpp"
#include "mmjoin/error.hpp"
#include "mmjoin/joinproject.hpp"
#include "mmjoin/matmul.hpp"
#include "mmjoin/optimizer.hpp"
#include "mmjoin/relation.hpp"

using namespace mmjoin;

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;

// Raised for data problems detected by the front end itself.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PlanFlags {
  bool auto_plan = false;
  bool full_join = false;
  std::optional<std::uint64_t> delta1, delta2;
  std::string calibration;
  unsigned cores = 1;
  bool measure_constants = false;
};

void add_plan_flags(CLI::App* cmd, PlanFlags& f) {
  cmd->add_flag("--auto-plan", f.auto_plan, "Choose thresholds with the cost-based optimizer");
  cmd->add_flag("--fulljoin", f.full_join, "Evaluate as a full join followed by deduplication");
  cmd->add_option("--delta1", f.delta1, "Degree threshold of the join value")->check(CLI::PositiveNumber);
  cmd->add_option("--delta2", f.delta2, "Degree threshold of the output values")->check(CLI::PositiveNumber);
  cmd->add_option("--calibration", f.calibration, "Calibration table (default: $MMJOIN_CALIBRATION)");
  cmd->add_option("--cores", f.cores, "Threads for matrix multiplication")->check(CLI::Range(1u, 256u));
  cmd->add_flag("--measure-constants", f.measure_constants,
                "Micro-benchmark the cost constants instead of using defaults");
}

std::string calibration_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("MMJOIN_CALIBRATION")) return env;
  return {};
}

// Explicit thresholds win; then a full join; otherwise the optimizer with a
// calibration table, falling back to the closed-form plan without one.
ThresholdPlan choose_plan(const IndexedRelation& r, const IndexedRelation& s, const PlanFlags& f) {
  if (f.delta1 || f.delta2) {
    if (!f.delta1 || !f.delta2) throw CLI::ValidationError("--delta1 and --delta2 go together");
    return ThresholdPlan::partitioned(*f.delta1, *f.delta2);
  }
  if (f.full_join) return ThresholdPlan::full_join();
  std::string path = calibration_path(f.calibration);
  if (path.empty()) {
    if (f.auto_plan) {
      std::cerr << "note: no calibration table (run `mmjoin calibrate`); using closed-form thresholds\n";
    }
    return closed_form_plan(r, s);
  }
  CalibrationTable table = CalibrationTable::load(path);
  CostConstants consts = f.measure_constants ? CostConstants::measure(f.cores) : CostConstants{};
  consts.cores = f.cores;
  return optimize_thresholds(r, s, consts, table);
}

void print_plan(std::ostream& out, const ThresholdPlan& plan) {
  out << "# plan " << to_string(plan.strategy);
  if (plan.strategy == Strategy::Partitioned) {
    out << " delta1=" << plan.delta1 << " delta2=" << plan.delta2 << " iterations=" << plan.iterations;
  }
  out << '\n';
}

std::uint64_t parse_count(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size() || !(v >= 0) || v > 1e15) throw std::invalid_argument(text);
    return static_cast<std::uint64_t>(std::llround(v));
  } catch (const std::exception&) {
    throw CLI::ValidationError(std::string(what) + ": expected a count, got '" + text + "'");
  }
}

std::pair<IndexedRelation, IndexedRelation> load_pair(const std::string& left, const std::string& right) {
  auto ys = std::make_shared<Dictionary>();
  Relation r = load_edge_list(left, "R", nullptr, ys);
  Relation s = load_edge_list(right, "S", nullptr, ys);
  return {IndexedRelation(std::move(r)), IndexedRelation(std::move(s))};
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw DataError("cannot write " + path);
  return file;
}

// ---------------------------------------------------------------- datasets

struct DatasetFlags {
  std::string name = "community";
  std::string n = "1e4";
  std::size_t communities = 1;
  double p = 0.9;
  double skew = 1.1;
  std::uint64_t seed = 42;
};

void add_dataset_flags(CLI::App* cmd, DatasetFlags& f) {
  cmd->add_option("--dataset", f.name, "community, uniform or skewed")
      ->check(CLI::IsMember({"community", "uniform", "skewed"}));
  cmd->add_option("--n", f.n, "Approximate number of tuples (1e5 style accepted)");
  cmd->add_option("--communities", f.communities, "Communities of the community graph")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--p", f.p, "Intra-community edge probability")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--skew", f.skew, "Degree skew of the skewed generator")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Random seed");
}

Relation make_dataset(const DatasetFlags& f) {
  std::uint64_t n = std::max<std::uint64_t>(parse_count(f.n, "--n"), 1);
  if (f.name == "community") {
    double per = std::sqrt(static_cast<double>(n) / (static_cast<double>(f.communities) * std::max(f.p, 1e-9)));
    auto nodes = static_cast<std::size_t>(std::max(1.0, std::round(per)) * static_cast<double>(f.communities));
    return generate_community_graph(nodes, f.communities, f.p, f.seed);
  }
  auto side = static_cast<std::size_t>(std::max(2.0, std::sqrt(static_cast<double>(n)) * 2));
  if (f.name == "uniform") return generate_uniform_relation(side, side, n, f.seed);
  return generate_skewed_relation(side, side, n, f.skew, f.seed);
}

// ---------------------------------------------------------------- oracles

using PairCounts = std::map<std::pair<ValueId, ValueId>, std::uint64_t>;

PairCounts reference_two_path(const IndexedRelation& r, const IndexedRelation& s) {
  PairCounts out;
  for (const Tuple& t : r.base().tuples()) {
    for (ValueId c : s.rev()[t.right]) ++out[{t.left, c}];
  }
  return out;
}

PairCounts counts_of(const OutputSet& o) {
  PairCounts m;
  for (std::size_t i = 0; i < o.size(); ++i) {
    m[{o.tuple(i)[0], o.tuple(i)[1]}] = o.has_counts() ? o.count(i) : 1;
  }
  return m;
}

std::size_t merge_overlap(std::span<const ValueId> x, std::span<const ValueId> y) {
  std::size_t i = 0, j = 0, n = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] < y[j]) ++i;
    else if (y[j] < x[i]) ++j;
    else ++n, ++i, ++j;
  }
  return n;
}

PairCounts reference_ssj(const SetFamily& f, std::uint64_t c) {
  PairCounts out;
  auto sets = f.active_sets();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      auto n = merge_overlap(f.elements(sets[i]), f.elements(sets[j]));
      if (n >= c) out[{sets[i], sets[j]}] = n;
    }
  }
  return out;
}

std::set<std::pair<ValueId, ValueId>> reference_scj(const SetFamily& f) {
  std::set<std::pair<ValueId, ValueId>> out;
  auto sets = f.active_sets();
  for (ValueId a : sets) {
    for (ValueId b : sets) {
      if (a != b && merge_overlap(f.elements(a), f.elements(b)) == f.set_size(a)) out.emplace(a, b);
    }
  }
  return out;
}

// ---------------------------------------------------------------- commands

int cmd_gen(const DatasetFlags& f, const std::string& out_path) {
  Relation r = make_dataset(f);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  out << "# dataset " << f.name << " seed " << f.seed << " tuples " << r.size() << '\n';
  write_edge_list(out, r);
  return 0;
}

int cmd_twopath(const std::string& left, const std::string& right, const PlanFlags& pf, bool counts,
                const std::string& out_path) {
  auto [r, s] = load_pair(left, right);
  ThresholdPlan plan = choose_plan(r, s, pf);
  JoinOptions options;
  options.multiply.cores = pf.cores;
  OutputSet result = two_path_join(r, s, plan, counts, options);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  print_plan(std::cerr, plan);
  const auto& xd = *r.base().left_dict();
  const auto& zd = *s.base().left_dict();
  for (std::size_t i = 0; i < result.size(); ++i) {
    auto t = result.tuple(i);
    out << xd.token(t[0]) << ' ' << zd.token(t[1]);
    if (counts) out << ' ' << result.count(i);
    out << '\n';
  }
  return 0;
}

int cmd_star(const std::vector<std::string>& files, std::uint64_t d1, std::uint64_t d2, bool counts,
             unsigned cores, const std::string& out_path) {
  if (files.size() < 2 || files.size() > 4) throw CLI::ValidationError("--rel: give 2 to 4 relations");
  auto ys = std::make_shared<Dictionary>();
  std::vector<IndexedRelation> rels;
  for (std::size_t i = 0; i < files.size(); ++i) {
    rels.emplace_back(load_edge_list(files[i], "R" + std::to_string(i + 1), nullptr, ys));
  }
  std::vector<const IndexedRelation*> ptrs;
  for (auto& r : rels) ptrs.push_back(&r);
  JoinOptions options;
  options.multiply.cores = cores;
  OutputSet result = star_join(ptrs, d1, d2, counts, options);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  for (std::size_t i = 0; i < result.size(); ++i) {
    auto t = result.tuple(i);
    for (std::size_t j = 0; j < t.size(); ++j) {
      out << (j ? " " : "") << rels[j].base().left_dict()->token(t[j]);
    }
    if (counts) out << ' ' << result.count(i);
    out << '\n';
  }
  return 0;
}

int cmd_ssj(const std::string& input, std::uint64_t c, const std::string& method, std::size_t depth_cap,
            const std::string& out_path) {
  SetFamily f(load_edge_list(input, "sets"));
  const auto& names = *f.relation().left_dict();
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  auto emit = [&](ValueId a, ValueId b, std::uint64_t n) {
    out << names.token(a) << ' ' << names.token(b) << ' ' << n << '\n';
  };
  if (method == "ordered") {
    for (const auto& p : ssj_ordered(f, c)) emit(p.a, p.b, p.overlap);
    return 0;
  }
  OutputSet pairs(2);
  if (method == "mmjoin") pairs = ssj_mmjoin(f, c);
  else if (method == "sizeaware") pairs = ssj_size_aware(f, c);
  else pairs = ssj_size_aware_pp(f, c, depth_cap).pairs;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto t = pairs.tuple(i);
    std::uint64_t n = pairs.has_counts() ? pairs.count(i) : merge_overlap(f.elements(t[0]), f.elements(t[1]));
    emit(t[0], t[1], n);
  }
  return 0;
}

int cmd_scj(const std::string& input, const std::string& out_path) {
  SetFamily f(load_edge_list(input, "sets"));
  const auto& names = *f.relation().left_dict();
  OutputSet pairs = scj_join_project(f);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto t = pairs.tuple(i);
    out << names.token(t[0]) << ' ' << names.token(t[1]) << ' ' << f.set_size(t[0]) << '\n';
  }
  return 0;
}

int cmd_bsi(const std::string& left, const std::string& right, const std::string& queries,
            std::optional<std::uint64_t> batch, const std::string& out_path) {
  auto [r, s] = load_pair(left, right);
  std::ifstream in(queries);
  if (!in) throw DataError("cannot read " + queries);
  BsiWorkload w = parse_bsi_workload(in, *r.base().left_dict(), *s.base().left_dict());
  std::uint64_t n = std::max(r.size(), s.size());
  std::size_t c = batch ? *batch : bsi_batch_size(std::max(1.0, w.rate), static_cast<double>(std::max<std::uint64_t>(n, 1)));
  c = std::max<std::size_t>(1, std::min<std::size_t>(c, std::max<std::size_t>(w.queries.size(), 1)));

  std::vector<BsiAnswer> answers;
  std::map<std::size_t, double> measured;  // batch length -> micros
  for (std::size_t lo = 0; lo < w.queries.size(); lo += c) {
    std::size_t hi = std::min(w.queries.size(), lo + c);
    std::vector<std::pair<ValueId, ValueId>> part;
    for (std::size_t i = lo; i < hi; ++i) part.emplace_back(w.queries[i].a, w.queries[i].b);
    std::vector<BsiAnswer> got;
    auto ns = timed_nanos([&] { got = bsi_answer_batch(r, s, part); }, 3);
    measured.try_emplace(hi - lo, static_cast<double>(ns) / 1000.0);
    answers.insert(answers.end(), got.begin(), got.end());
  }
  auto sim = bsi_simulate(w, c, [&](std::size_t len) {
    auto it = measured.lower_bound(len);
    return it != measured.end() ? it->second : measured.rbegin()->second;
  });
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  std::ifstream names(queries);
  std::string line;
  std::size_t i = 0;
  while (std::getline(names, line)) {
    std::istringstream fields(line);
    std::string a, b;
    if (!(fields >> a) || a[0] == '#' || !(fields >> b)) continue;
    out << a << ' ' << b << ' ' << to_string(answers[i++]) << '\n';
  }
  std::cerr << "# batch_size " << c << " batches " << sim.batches << " average_delay_micros "
            << sim.average_delay << " implied_units " << sim.implied_units << '\n';
  return 0;
}

int cmd_calibrate(const std::string& out_path, const std::vector<std::size_t>& dims,
                  const std::vector<unsigned>& cores, unsigned runs, bool wide, std::uint64_t seed) {
  CalibrationConfig cfg = wide ? CalibrationConfig::wide() : CalibrationConfig{};
  if (!dims.empty()) cfg.probe_dims = dims;
  if (!cores.empty()) cfg.cores = cores;
  cfg.runs = runs;
  cfg.seed = seed;
  CalibrationTable t = calibrate(cfg);
  std::string path = out_path.empty() ? calibration_path("") : out_path;
  if (path.empty()) path = "calibration.tsv";
  t.save(path);
  std::cout << "wrote " << t.size() << " entries to " << path << " (seed " << seed << ")\n";
  return 0;
}

struct BenchFlags {
  std::string query = "twopath";
  std::string methods = "mmjoin,fulljoin";
  std::string csv;
  std::string input;
  std::uint64_t c = 2;
  std::size_t k = 3;
  int runs = 5;
};

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_bench(const BenchFlags& b, const DatasetFlags& df, const PlanFlags& pf) {
  Relation base = b.input.empty() ? make_dataset(df) : load_edge_list(b.input, "input");
  std::string dataset = b.input.empty() ? df.name : b.input;
  std::cout << "# dataset " << dataset << " tuples " << base.size() << " seed " << df.seed << '\n';
  IndexedRelation r(base);
  JoinOptions options;
  options.multiply.cores = pf.cores;

  const std::vector<std::string> allowed = [&]() -> std::vector<std::string> {
    if (b.query == "twopath") return {"mmjoin", "fulljoin", "oracle"};
    if (b.query == "star") return {"mmjoin", "fulljoin"};
    if (b.query == "ssj") return {"mmjoin", "fulljoin", "sizeaware", "sizeaware-pp"};
    return {"mmjoin", "fulljoin", "oracle"};
  }();
  std::vector<BenchRecord> records;
  for (const std::string& method : split(b.methods)) {
    if (std::find(allowed.begin(), allowed.end(), method) == allowed.end()) {
      throw CLI::ValidationError("--methods: '" + method + "' does not apply to " + b.query);
    }
    BenchRecord rec;
    rec.dataset = dataset;
    rec.method = method;
    ThresholdPlan plan = method == "fulljoin" ? ThresholdPlan::full_join() : choose_plan(r, r, pf);
    std::uint64_t size = 0;
    std::function<void()> run;
    if (b.query == "twopath") {
      rec.query = "twopath";
      if (method == "oracle") {
        run = [&] { size = reference_two_path(r, r).size(); };
        plan = ThresholdPlan::full_join();
      } else {
        run = [&] { size = two_path_join(r, r, plan, false, options).size(); };
      }
    } else if (b.query == "star") {
      rec.query = "star-" + std::to_string(b.k);
      if (b.k < 2 || b.k > 4) throw CLI::ValidationError("--k must be 2, 3 or 4");
      std::vector<const IndexedRelation*> ptrs(b.k, &r);
      std::uint64_t big = std::max<std::uint64_t>(r.size(), 1);
      if (plan.strategy == Strategy::FullJoin) plan = ThresholdPlan::partitioned(big, big);
      run = [&, ptrs, d1 = plan.delta1, d2 = plan.delta2] {
        size = star_join(ptrs, d1, d2, false, options).size();
      };
      if (method == "fulljoin") plan = ThresholdPlan::full_join();
    } else if (b.query == "ssj" || b.query == "scj") {
      SetFamily f(base);
      SsjOptions so;
      so.join = options;
      so.plan = plan;
      rec.query = b.query == "ssj" ? "ssj-" + std::to_string(b.c) : "scj";
      if (b.query == "ssj") {
        if (method == "sizeaware") run = [&, f] { size = ssj_size_aware(f, b.c, so).size(); };
        else if (method == "sizeaware-pp") run = [&, f] { size = ssj_size_aware_pp(f, b.c, 8, so).pairs.size(); };
        else run = [&, f] { size = ssj_mmjoin(f, b.c, so).size(); };
      } else if (method == "oracle") {
        run = [&, f] { size = reference_scj(f).size(); };
      } else {
        run = [&, f] { size = scj_join_project(f, so).size(); };
      }
    } else {
      throw CLI::ValidationError("unknown query '" + b.query + "'");
    }
    rec.wall_nanos = timed_nanos(run, b.runs);
    rec.output_size = size;
    rec.set_plan(plan);
    records.push_back(rec);
  }
  write_bench_csv(std::cout, records);
  if (!b.csv.empty()) {
    std::ofstream out(b.csv);
    if (!out) throw DataError("cannot write " + b.csv);
    write_bench_csv(out, records);
  }
  for (const auto& rec : records) {
    if (rec.output_size != records.front().output_size) {
      std::cerr << "output size mismatch: " << rec.method << " " << rec.output_size << " vs "
                << records.front().method << " " << records.front().output_size << '\n';
      return kExitMismatch;
    }
  }
  return 0;
}

int cmd_check(const std::string& query, std::uint64_t seed, const std::string& n_text) {
  std::uint64_t n = std::max<std::uint64_t>(parse_count(n_text, "--n"), 10);
  std::mt19937_64 rng(seed);
  std::size_t checks = 0, mismatches = 0;
  auto note = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++mismatches;
      std::cerr << "mismatch: " << what << '\n';
    }
  };
  auto side = static_cast<std::size_t>(std::max(4.0, std::sqrt(static_cast<double>(n))));
  if (query == "twopath" || query == "star") {
    auto ys = std::make_shared<Dictionary>();
    std::size_t k = query == "star" ? 3 : 2;
    std::vector<IndexedRelation> rels;
    for (std::size_t i = 0; i < k; ++i) {
      rels.emplace_back(generate_skewed_relation(side * 2, side, n, 1.1, seed + i, nullptr, ys));
    }
    if (query == "twopath") {
      const auto& r = rels[0];
      const auto& s = rels[1];
      PairCounts want = reference_two_path(r, s);
      std::vector<ThresholdPlan> plans{closed_form_plan(r, s), ThresholdPlan::full_join()};
      for (int i = 0; i < 8; ++i) plans.push_back(ThresholdPlan::partitioned(1 + rng() % side, 1 + rng() % side));
      for (const auto& plan : plans) {
        note(counts_of(two_path_join(r, s, plan, true)) == want,
             "twopath " + to_tsv(plan));
      }
    } else {
      std::map<std::vector<ValueId>, std::uint64_t> want;
      for (ValueId y = 0; y < ys->size(); ++y) {
        for (ValueId a : rels[0].rev()[y])
          for (ValueId b : rels[1].rev()[y])
            for (ValueId c : rels[2].rev()[y]) ++want[{a, b, c}];
      }
      std::vector<const IndexedRelation*> ptrs{&rels[0], &rels[1], &rels[2]};
      for (int i = 0; i < 4; ++i) {
        std::uint64_t d1 = 1 + rng() % side, d2 = 1 + rng() % side;
        OutputSet got;
        try {
          got = star_join(ptrs, d1, d2, true);
        } catch (const ResourceError&) {
          continue;
        }
        std::map<std::vector<ValueId>, std::uint64_t> m;
        for (std::size_t j = 0; j < got.size(); ++j) m[{got.tuple(j).begin(), got.tuple(j).end()}] = got.count(j);
        note(m == want, "star d1=" + std::to_string(d1) + " d2=" + std::to_string(d2));
      }
    }
  } else if (query == "ssj" || query == "scj") {
    SetFamily f(generate_skewed_relation(side * 2, side, n, 1.1, seed));
    if (query == "ssj") {
      for (std::uint64_t c : {1u, 2u, 3u}) {
        PairCounts want = reference_ssj(f, c);
        std::set<std::pair<ValueId, ValueId>> keys;
        for (const auto& kv : want) keys.insert(kv.first);
        auto as_set = [](const OutputSet& o) {
          std::set<std::pair<ValueId, ValueId>> s;
          for (std::size_t i = 0; i < o.size(); ++i) s.emplace(o.tuple(i)[0], o.tuple(i)[1]);
          return s;
        };
        note(counts_of(ssj_mmjoin(f, c)) == want, "ssj mmjoin c=" + std::to_string(c));
        try {
          note(as_set(ssj_size_aware(f, c)) == keys, "ssj sizeaware c=" + std::to_string(c));
        } catch (const ResourceError&) {
          std::cerr << "note: sizeaware skipped for c=" << c << " (subset cap)\n";
        }
        note(as_set(ssj_size_aware_pp(f, c).pairs) == keys, "ssj sizeaware-pp c=" + std::to_string(c));
        note(as_set(ssj_size_aware_pp(f, c, 0).pairs) == keys, "ssj sizeaware-pp cap0 c=" + std::to_string(c));
      }
    } else {
      auto want = reference_scj(f);
      OutputSet got = scj_join_project(f);
      std::set<std::pair<ValueId, ValueId>> s;
      for (std::size_t i = 0; i < got.size(); ++i) s.emplace(got.tuple(i)[0], got.tuple(i)[1]);
      note(s == want, "scj");
    }
  } else {
    throw CLI::ValidationError("check: unknown query '" + query + "'");
  }
  std::cout << "check " << query << " seed " << seed << " n " << n << ": " << checks - mismatches << "/"
            << checks << " agree\n";
  return mismatches == 0 ? 0 : kExitMismatch;
}

int cmd_report(const std::string& csv) {
  std::ifstream in(csv);
  if (!in) throw DataError("cannot read " + csv);
  auto records = read_bench_csv(in);
  auto rows = speedups(records);
  std::cout << format_speedups(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmjoin: join-project evaluation with heavy/light partitioning and matrix multiplication"};
  app.require_subcommand(1);

  DatasetFlags gen_flags;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic edge list");
  add_dataset_flags(gen, gen_flags);
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  std::string left, right, out_path;
  PlanFlags plan_flags;
  bool counts = false;
  auto* twopath = app.add_subcommand("twopath", "pi_{x,z}(R(x,y), S(z,y)) over two edge lists");
  twopath->add_option("--left", left, "R(x, y) edge list")->required()->check(CLI::ExistingFile);
  twopath->add_option("--right", right, "S(z, y) edge list")->required()->check(CLI::ExistingFile);
  twopath->add_flag("--counts", counts, "Print the number of witnesses per pair");
  twopath->add_option("--out", out_path, "Output file (default stdout)");
  add_plan_flags(twopath, plan_flags);

  std::vector<std::string> star_files;
  std::uint64_t star_d1 = 2, star_d2 = 2;
  unsigned star_cores = 1;
  auto* star = app.add_subcommand("star", "Star join-project over 2 to 4 edge lists sharing y");
  star->add_option("--rel", star_files, "Edge list R_i(x_i, y); repeat 2 to 4 times")->required()->check(CLI::ExistingFile);
  star->add_option("--delta1", star_d1, "Degree threshold of y")->check(CLI::PositiveNumber);
  star->add_option("--delta2", star_d2, "Degree threshold of the x_i")->check(CLI::PositiveNumber);
  star->add_option("--cores", star_cores, "Threads for matrix multiplication")->check(CLI::Range(1u, 256u));
  star->add_flag("--counts", counts, "Print the number of witnesses per tuple");
  star->add_option("--out", out_path, "Output file (default stdout)");

  std::string input;
  std::uint64_t overlap = 2;
  std::string ssj_method = "mmjoin";
  std::size_t depth_cap = 8;
  auto* ssj = app.add_subcommand("ssj", "Set similarity join: pairs sharing at least c elements");
  ssj->add_option("--input", input, "Edge list `set element`")->required()->check(CLI::ExistingFile);
  ssj->add_option("--c", overlap, "Overlap threshold")->check(CLI::PositiveNumber);
  ssj->add_option("--method", ssj_method, "mmjoin, sizeaware, sizeaware-pp or ordered")
      ->check(CLI::IsMember({"mmjoin", "sizeaware", "sizeaware-pp", "ordered"}));
  ssj->add_option("--depth-cap", depth_cap, "Prefix-tree depth cap for sizeaware-pp");
  ssj->add_option("--out", out_path, "Output file (default stdout)");

  auto* scj = app.add_subcommand("scj", "Set containment join: pairs (a, b) with a contained in b");
  scj->add_option("--input", input, "Edge list `set element`")->required()->check(CLI::ExistingFile);
  scj->add_option("--out", out_path, "Output file (default stdout)");

  std::string queries;
  std::optional<std::uint64_t> batch;
  auto* bsi = app.add_subcommand("bsi", "Batched boolean set intersection queries");
  bsi->add_option("--left", left, "R(a, y) edge list")->required()->check(CLI::ExistingFile);
  bsi->add_option("--right", right, "S(b, y) edge list")->required()->check(CLI::ExistingFile);
  bsi->add_option("--queries", queries, "Workload lines `a b arrival_micros`")->required()->check(CLI::ExistingFile);
  bsi->add_option("--batch", batch, "Batch size (default ceil((B*N)^0.6))")->check(CLI::PositiveNumber);
  bsi->add_option("--out", out_path, "Output file (default stdout)");

  std::string cal_out;
  std::vector<std::size_t> cal_dims;
  std::vector<unsigned> cal_cores;
  unsigned cal_runs = 3;
  bool cal_wide = false;
  std::uint64_t cal_seed = 42;
  auto* cal = app.add_subcommand("calibrate", "Measure matrix multiplication times for the optimizer");
  cal->add_option("--out", cal_out, "Table path (default $MMJOIN_CALIBRATION or calibration.tsv)");
  cal->add_option("--dims", cal_dims, "Probe dimensions")->delimiter(',');
  cal->add_option("--cores", cal_cores, "Core counts")->delimiter(',');
  cal->add_option("--runs", cal_runs, "Repetitions per probe (median)")->check(CLI::Range(1u, 100u));
  cal->add_flag("--wide", cal_wide, "Probe p = 50..1000 on 1..5 cores");
  cal->add_option("--seed", cal_seed, "Random seed for probe matrices");

  BenchFlags bench_flags;
  DatasetFlags bench_data;
  PlanFlags bench_plan;
  auto* bench = app.add_subcommand("bench", "Time methods on one query and dataset; emits CSV");
  bench->add_option("query", bench_flags.query, "twopath, star, ssj or scj")
      ->check(CLI::IsMember({"twopath", "star", "ssj", "scj"}));
  bench->add_option("--methods", bench_flags.methods, "Comma-separated methods");
  bench->add_option("--csv", bench_flags.csv, "Also write the CSV to this file");
  bench->add_option("--input", bench_flags.input, "Edge list instead of a generated dataset")->check(CLI::ExistingFile);
  bench->add_option("--c", bench_flags.c, "Overlap threshold for ssj")->check(CLI::PositiveNumber);
  bench->add_option("--k", bench_flags.k, "Arity of the star query");
  bench->add_option("--runs", bench_flags.runs, "Timed runs; min and max are dropped")->check(CLI::Range(3, 101));
  add_dataset_flags(bench, bench_data);
  add_plan_flags(bench, bench_plan);

  std::string check_query = "twopath";
  std::uint64_t check_seed = 7;
  std::string check_n = "2000";
  auto* check = app.add_subcommand("check", "Compare methods against a reference on a random instance");
  check->add_option("query", check_query, "twopath, star, ssj or scj")
      ->check(CLI::IsMember({"twopath", "star", "ssj", "scj"}));
  check->add_option("--seed", check_seed, "Random seed");
  check->add_option("--n", check_n, "Tuples per relation");

  std::string report_csv;
  auto* report = app.add_subcommand("report", "Speedups from a bench CSV");
  report->add_option("csv", report_csv, "CSV written by bench")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(gen_flags, gen_out);
    if (*twopath) return cmd_twopath(left, right, plan_flags, counts, out_path);
    if (*star) return cmd_star(star_files, star_d1, star_d2, counts, star_cores, out_path);
    if (*ssj) return cmd_ssj(input, overlap, ssj_method, depth_cap, out_path);
    if (*scj) return cmd_scj(input, out_path);
    if (*bsi) return cmd_bsi(left, right, queries, batch, out_path);
    if (*cal) return cmd_calibrate(cal_out, cal_dims, cal_cores, cal_runs, cal_wide, cal_seed);
    if (*bench) return cmd_bench(bench_flags, bench_data, bench_plan);
    if (*check) return cmd_check(check_query, check_seed, check_n);
    if (*report) return cmd_report(report_csv);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
