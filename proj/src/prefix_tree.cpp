#include <algorithm>

#include "mmjoin/apps.hpp"

namespace mmjoin {

PrefixTree::PrefixTree(const SetFamily& probe, const SetFamily& lists, std::uint64_t c,
                       std::size_t depth_cap)
    : probe_(probe), lists_(lists), c_(c), depth_cap_(depth_cap) {
  std::size_t space = std::max(probe.element_space(), lists.element_space());
  order_.resize(space);
  for (std::size_t b = 0; b < space; ++b) order_[b] = static_cast<ValueId>(b);
  std::stable_sort(order_.begin(), order_.end(), [&](ValueId x, ValueId y) {
    return lists_.sets_with(x).size() > lists_.sets_with(y).size();
  });
  rank_.resize(space);
  for (std::size_t i = 0; i < space; ++i) rank_[order_[i]] = static_cast<std::uint32_t>(i);
}

void PrefixTree::extend(const Node& from, ValueId element, Node& to) {
  to.path = from.path;
  to.path.push_back(element);
  to.output.clear();
  to.residual.clear();
  auto list = lists_.sets_with(element);
  ops_ += list.size();

  std::vector<ValueId> promoted;
  auto res = from.residual.begin();
  for (ValueId e : list) {
    while (res != from.residual.end() && res->first < e) to.residual.push_back(*res++);
    if (std::binary_search(from.output.begin(), from.output.end(), e)) continue;
    std::uint32_t count = 1;
    if (res != from.residual.end() && res->first == e) count += (res++)->second;
    if (count >= c_) {
      promoted.push_back(e);
    } else {
      to.residual.emplace_back(e, count);
    }
  }
  to.residual.insert(to.residual.end(), res, from.residual.end());
  to.output.resize(from.output.size() + promoted.size());
  std::merge(from.output.begin(), from.output.end(), promoted.begin(), promoted.end(),
             to.output.begin());
}

void PrefixTree::run(const std::function<void(ValueId, std::span<const ValueId>)>& emit,
                     bool reuse) {
  ops_ = 0;
  per_set_.clear();
  snapshots_.clear();

  struct Entry {
    ValueId set;
    std::vector<ValueId> path;
  };
  std::vector<Entry> entries;
  for (ValueId a : probe_.active_sets()) {
    auto elems = probe_.elements(a);
    Entry e{a, {elems.begin(), elems.end()}};
    std::sort(e.path.begin(), e.path.end(),
              [&](ValueId x, ValueId y) { return rank_[x] < rank_[y]; });
    entries.push_back(std::move(e));
  }
  std::stable_sort(entries.begin(), entries.end(), [&](const Entry& x, const Entry& y) {
    return std::lexicographical_compare(x.path.begin(), x.path.end(), y.path.begin(), y.path.end(),
                                        [&](ValueId p, ValueId q) { return rank_[p] < rank_[q]; });
  });

  const Node root;
  std::vector<Node> stack;
  Node scratch, next;
  for (const Entry& entry : entries) {
    const std::uint64_t before = ops_;
    const auto& path = entry.path;
    std::size_t keep = 0;
    if (reuse) {
      while (keep < stack.size() && keep < path.size() && stack[keep].path.back() == path[keep]) {
        ++keep;
      }
    }
    stack.resize(keep);
    const std::size_t depth = std::min(path.size(), depth_cap_);
    while (stack.size() < depth) {
      Node node;
      extend(stack.empty() ? root : stack.back(), path[stack.size()], node);
      if (keep_snapshots_) snapshots_.push_back(node);
      stack.push_back(std::move(node));
    }
    const Node* result = stack.empty() ? &root : &stack.back();
    if (path.size() > depth) {
      scratch = *result;
      for (std::size_t i = depth; i < path.size(); ++i) {
        extend(scratch, path[i], next);
        std::swap(scratch, next);
      }
      result = &scratch;
    }
    emit(entry.set, result->output);
    per_set_.emplace_back(entry.set, ops_ - before);
    if (!reuse) stack.clear();
  }
}

}  // namespace mmjoin
