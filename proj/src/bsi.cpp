#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mmjoin/apps.hpp"
#include "mmjoin/error.hpp"
#include "mmjoin/optimizer.hpp"

namespace mmjoin {

namespace {

bool known(const IndexedRelation& r, ValueId a) {
  return a < r.base().left_id_space() && r.left_degree(a) > 0;
}

// Tuples of r whose left value is one of the (sorted, unique) keys.
Relation restrict_left(const IndexedRelation& r, const std::vector<ValueId>& keys) {
  std::vector<Tuple> tuples;
  for (ValueId a : keys) {
    for (ValueId b : r.fwd()[a]) tuples.push_back({a, b});
  }
  return Relation::from_ids(r.base().name(), std::move(tuples), r.base().left_dict(),
                            r.base().right_dict());
}

void sort_unique(std::vector<ValueId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

const char* to_string(BsiAnswer a) {
  switch (a) {
    case BsiAnswer::Disjoint: return "false";
    case BsiAnswer::Intersecting: return "true";
    case BsiAnswer::UnknownSet: return "unknown";
  }
  return "?";
}

std::vector<BsiAnswer> bsi_answer_batch(const IndexedRelation& r, const IndexedRelation& s,
                                        std::span<const std::pair<ValueId, ValueId>> batch,
                                        const JoinOptions& options) {
  std::vector<BsiAnswer> answers(batch.size(), BsiAnswer::UnknownSet);
  std::vector<ValueId> left, right;
  for (const auto& [a, b] : batch) {
    if (known(r, a) && known(s, b)) {
      left.push_back(a);
      right.push_back(b);
    }
  }
  if (left.empty()) return answers;
  sort_unique(left);
  sort_unique(right);
  IndexedRelation rb(restrict_left(r, left));
  IndexedRelation sb(restrict_left(s, right));
  OutputSet hits = two_path_join(rb, sb, closed_form_plan(rb, sb), false, options);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto [a, b] = batch[i];
    if (!known(r, a) || !known(s, b)) continue;
    const ValueId key[2] = {a, b};
    answers[i] = hits.contains(key) ? BsiAnswer::Intersecting : BsiAnswer::Disjoint;
  }
  return answers;
}

std::uint64_t bsi_batch_size(double rate, double n) {
  if (!(rate >= 1 && n >= 1)) throw std::invalid_argument("rate and input size must be >= 1");
  double c = std::pow(rate * n, 0.6);
  // Absorb rounding noise on exact powers.
  return static_cast<std::uint64_t>(std::ceil(c * (1 - 1e-12)));
}

BsiWorkload parse_bsi_workload(std::istream& in, const Dictionary& r_sets,
                               const Dictionary& s_sets) {
  BsiWorkload w;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string a, b, t, extra;
    if (!(fields >> a) || a[0] == '#') continue;
    if (!(fields >> b >> t) || (fields >> extra)) {
      throw ParseError(line_no, "expected `a b arrival`");
    }
    double arrival = 0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), arrival);
    if (ec != std::errc() || end != t.data() + t.size() || !std::isfinite(arrival)) {
      throw ParseError(line_no, "bad arrival time '" + t + "'");
    }
    if (!w.queries.empty() && arrival < w.queries.back().arrival) {
      throw ParseError(line_no, "arrival times must be nondecreasing");
    }
    w.queries.push_back({r_sets.find(a).value_or(kUnknownSet), s_sets.find(b).value_or(kUnknownSet),
                         arrival});
  }
  if (w.queries.size() > 1) {
    double span = w.queries.back().arrival - w.queries.front().arrival;
    w.rate = span > 0 ? static_cast<double>(w.queries.size() - 1) / span : 1.0;
  }
  return w;
}

BsiWorkload uniform_bsi_workload(std::vector<std::pair<ValueId, ValueId>> pairs, double rate) {
  if (!(rate > 0)) throw std::invalid_argument("rate must be positive");
  BsiWorkload w;
  w.rate = rate;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    w.queries.push_back({pairs[i].first, pairs[i].second, static_cast<double>(i) / rate});
  }
  return w;
}

BsiSimulation bsi_simulate(const BsiWorkload& workload, std::size_t batch_size,
                           const std::function<double(std::size_t)>& batch_cost) {
  if (batch_size == 0) throw std::invalid_argument("batch size must be at least 1");
  BsiSimulation sim;
  const auto& q = workload.queries;
  double server_free = 0, total_delay = 0;
  for (std::size_t lo = 0; lo < q.size(); lo += batch_size) {
    std::size_t hi = std::min(q.size(), lo + batch_size);
    double start = std::max(q[hi - 1].arrival, server_free);
    double done = start + batch_cost(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) total_delay += done - q[i].arrival;
    server_free = done;
    ++sim.batches;
  }
  if (!q.empty()) sim.average_delay = total_delay / static_cast<double>(q.size());
  sim.implied_units = workload.rate * batch_cost(batch_size) / static_cast<double>(batch_size);
  return sim;
}

}  // namespace mmjoin
