#include "mmjoin/apps.hpp"

namespace mmjoin {

SetFamily::SetFamily(Relation r) : index_(std::move(r)) {}

SetFamily SetFamily::from_sets(const std::vector<std::vector<ValueId>>& sets) {
  std::vector<std::pair<ValueId, ValueId>> pairs;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (ValueId e : sets[i]) pairs.emplace_back(static_cast<ValueId>(i), e);
  }
  return SetFamily(Relation::from_pairs("sets", pairs, sets.size(), 0));
}

std::vector<ValueId> SetFamily::active_sets() const {
  std::vector<ValueId> out;
  for (std::size_t a = 0; a < set_space(); ++a) {
    if (set_size(static_cast<ValueId>(a)) > 0) out.push_back(static_cast<ValueId>(a));
  }
  return out;
}

}  // namespace mmjoin
