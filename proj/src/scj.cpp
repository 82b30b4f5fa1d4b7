#include "mmjoin/apps.hpp"
#include "mmjoin/optimizer.hpp"

namespace mmjoin {

OutputSet scj_join_project(const SetFamily& sets, const SsjOptions& options) {
  const IndexedRelation& idx = sets.index();
  ThresholdPlan plan = options.plan ? *options.plan : closed_form_plan(idx, idx);
  OutputSet joined = two_path_join(idx, idx, plan, true, options.join);
  OutputSet out(2);
  for (std::size_t i = 0; i < joined.size(); ++i) {
    auto t = joined.tuple(i);
    if (t[0] != t[1] && joined.count(i) == sets.set_size(t[0])) out.push_pair(t[0], t[1]);
  }
  return out;
}

}  // namespace mmjoin
