#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mmjoin/relation.hpp"

namespace mmjoin {

namespace {

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined distributions of <random>.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(unit(rng) * static_cast<double>(n));
}

std::shared_ptr<Dictionary> or_identity(std::shared_ptr<Dictionary> dict, std::size_t n) {
  if (!dict) return Dictionary::identity(n);
  while (dict->size() < n) dict->intern(std::to_string(dict->size()));
  return dict;
}

}  // namespace

Relation generate_community_graph(std::size_t num_nodes, std::size_t num_communities,
                                  double intra_edge_prob, std::uint64_t seed) {
  if (num_communities < 1) throw std::invalid_argument("num_communities must be >= 1");
  if (!(intra_edge_prob > 0.0 && intra_edge_prob <= 1.0)) {
    throw std::invalid_argument("intra_edge_prob must be in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::vector<Tuple> tuples;
  for (std::size_t c = 0; c < num_communities; ++c) {
    std::size_t lo = c * num_nodes / num_communities;
    std::size_t hi = (c + 1) * num_nodes / num_communities;
    for (std::size_t u = lo; u < hi; ++u) {
      for (std::size_t v = lo; v < hi; ++v) {
        if (intra_edge_prob >= 1.0 || unit(rng) < intra_edge_prob) {
          tuples.push_back({static_cast<ValueId>(u), static_cast<ValueId>(v)});
        }
      }
    }
  }
  auto nodes = Dictionary::identity(num_nodes);
  return Relation::from_ids("community", std::move(tuples), nodes, nodes);
}

Relation generate_uniform_relation(std::size_t left_domain, std::size_t right_domain,
                                   std::size_t num_tuples, std::uint64_t seed,
                                   std::shared_ptr<Dictionary> left_dict,
                                   std::shared_ptr<Dictionary> right_dict) {
  std::mt19937_64 rng(seed);
  std::vector<Tuple> tuples;
  tuples.reserve(num_tuples);
  for (std::size_t i = 0; i < num_tuples && left_domain > 0 && right_domain > 0; ++i) {
    tuples.push_back({static_cast<ValueId>(below(rng, left_domain)),
                      static_cast<ValueId>(below(rng, right_domain))});
  }
  return Relation::from_ids("uniform", std::move(tuples),
                            or_identity(std::move(left_dict), left_domain),
                            or_identity(std::move(right_dict), right_domain));
}

Relation generate_skewed_relation(std::size_t left_domain, std::size_t right_domain,
                                  std::size_t num_tuples, double skew, std::uint64_t seed,
                                  std::shared_ptr<Dictionary> left_dict,
                                  std::shared_ptr<Dictionary> right_dict) {
  std::mt19937_64 rng(seed);
  auto cdf = [skew](std::size_t n) {
    std::vector<double> c(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += 1.0 / std::pow(static_cast<double>(i + 1), skew);
      c[i] = acc;
    }
    for (double& v : c) v /= acc;
    return c;
  };
  auto left_cdf = cdf(left_domain);
  auto right_cdf = cdf(right_domain);
  auto draw = [&](const std::vector<double>& c) {
    auto it = std::upper_bound(c.begin(), c.end(), unit(rng));
    return static_cast<ValueId>(std::min<std::size_t>(it - c.begin(), c.size() - 1));
  };

  std::vector<Tuple> tuples;
  tuples.reserve(num_tuples);
  for (std::size_t i = 0; i < num_tuples && left_domain > 0 && right_domain > 0; ++i) {
    ValueId a = draw(left_cdf);
    ValueId b = draw(right_cdf);
    tuples.push_back({a, b});
  }
  return Relation::from_ids("skewed", std::move(tuples),
                            or_identity(std::move(left_dict), left_domain),
                            or_identity(std::move(right_dict), right_domain));
}

}  // namespace mmjoin
