#include "mmjoin/relation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mmjoin/error.hpp"

namespace mmjoin {

ValueId Dictionary::intern(std::string_view token) {
  std::string key(token);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  auto id = static_cast<ValueId>(tokens_.size());
  tokens_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<ValueId> Dictionary::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::shared_ptr<Dictionary> Dictionary::identity(std::size_t n) {
  auto dict = std::make_shared<Dictionary>();
  dict->tokens_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) dict->intern(std::to_string(i));
  return dict;
}

Relation::Relation(std::string name, std::shared_ptr<Dictionary> left_dict,
                   std::shared_ptr<Dictionary> right_dict)
    : name_(std::move(name)), left_dict_(std::move(left_dict)), right_dict_(std::move(right_dict)) {
  if (!left_dict_) left_dict_ = std::make_shared<Dictionary>();
  if (!right_dict_) right_dict_ = std::make_shared<Dictionary>();
}

Relation Relation::from_ids(std::string name, std::vector<Tuple> tuples,
                            std::shared_ptr<Dictionary> left_dict,
                            std::shared_ptr<Dictionary> right_dict) {
  Relation r(std::move(name), std::move(left_dict), std::move(right_dict));
  for (const Tuple& t : tuples) {
    if (t.left >= r.left_dict_->size() || t.right >= r.right_dict_->size()) {
      throw std::out_of_range("tuple id outside dictionary of relation " + r.name_);
    }
  }
  r.tuples_ = std::move(tuples);
  r.normalize();
  return r;
}

Relation Relation::from_pairs(std::string name,
                              const std::vector<std::pair<ValueId, ValueId>>& pairs,
                              std::size_t left_domain, std::size_t right_domain) {
  std::vector<Tuple> tuples;
  tuples.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    tuples.push_back({a, b});
    left_domain = std::max<std::size_t>(left_domain, std::size_t{a} + 1);
    right_domain = std::max<std::size_t>(right_domain, std::size_t{b} + 1);
  }
  return from_ids(std::move(name), std::move(tuples), Dictionary::identity(left_domain),
                  Dictionary::identity(right_domain));
}

void Relation::normalize() {
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
}

bool Relation::contains(ValueId left, ValueId right) const {
  return std::binary_search(tuples_.begin(), tuples_.end(), Tuple{left, right});
}

Relation parse_edge_list(std::istream& in, std::string name, std::shared_ptr<Dictionary> left_dict,
                         std::shared_ptr<Dictionary> right_dict) {
  if (!left_dict) left_dict = std::make_shared<Dictionary>();
  if (!right_dict) right_dict = std::make_shared<Dictionary>();

  std::vector<Tuple> tuples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string left, right, extra;
    if (!(fields >> left >> right)) {
      throw ParseError(line_no, "expected two whitespace-separated tokens");
    }
    if (fields >> extra) {
      throw ParseError(line_no, "unexpected third token '" + extra + "'");
    }
    tuples.push_back({left_dict->intern(left), right_dict->intern(right)});
  }
  return Relation::from_ids(std::move(name), std::move(tuples), std::move(left_dict),
                            std::move(right_dict));
}

Relation load_edge_list(const std::string& path, std::string name,
                        std::shared_ptr<Dictionary> left_dict,
                        std::shared_ptr<Dictionary> right_dict) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_edge_list(in, name.empty() ? path : std::move(name), std::move(left_dict),
                         std::move(right_dict));
}

void write_edge_list(std::ostream& out, const Relation& r) {
  for (const Tuple& t : r.tuples()) {
    out << r.left_dict()->token(t.left) << ' ' << r.right_dict()->token(t.right) << '\n';
  }
}

std::pair<Relation, Relation> semi_join_reduce(const Relation& r, const Relation& s) {
  std::size_t space = std::max(r.right_id_space(), s.right_id_space());
  std::vector<char> in_r(space, 0), in_s(space, 0);
  for (const Tuple& t : r.tuples()) in_r[t.right] = 1;
  for (const Tuple& t : s.tuples()) in_s[t.right] = 1;
  return {r.filter([&](const Tuple& t) { return in_s[t.right] != 0; }),
          s.filter([&](const Tuple& t) { return in_r[t.right] != 0; })};
}

Adjacency::Adjacency(std::size_t key_space, std::span<const Tuple> tuples, bool by_left)
    : offsets_(key_space + 1, 0), targets_(tuples.size()) {
  for (const Tuple& t : tuples) ++offsets_[(by_left ? t.left : t.right) + 1];
  for (std::size_t i = 0; i < key_space; ++i) offsets_[i + 1] += offsets_[i];
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Tuples are sorted by (left, right): the forward lists come out sorted,
  // and a stable scatter by right keeps each reverse list sorted by left.
  for (const Tuple& t : tuples) {
    ValueId key = by_left ? t.left : t.right;
    targets_[cursor[key]++] = by_left ? t.right : t.left;
  }
}

IndexedRelation::IndexedRelation(Relation base)
    : base_(std::move(base)),
      fwd_(base_.left_id_space(), base_.tuples(), true),
      rev_(base_.right_id_space(), base_.tuples(), false) {
  for (std::size_t a = 0; a < fwd_.key_space(); ++a) left_active_ += fwd_.degree(a) > 0;
  for (std::size_t b = 0; b < rev_.key_space(); ++b) right_active_ += rev_.degree(b) > 0;
}

bool IndexedRelation::contains(ValueId a, ValueId b) const {
  auto list = fwd_[a];
  return std::binary_search(list.begin(), list.end(), b);
}

IndexedRelation build_indexed(Relation r) { return IndexedRelation(std::move(r)); }

std::uint64_t full_join_size(const IndexedRelation& r, const IndexedRelation& s) {
  std::size_t space = std::min(r.rev().key_space(), s.rev().key_space());
  std::uint64_t total = 0;
  for (ValueId b = 0; b < space; ++b) {
    total += static_cast<std::uint64_t>(r.right_degree(b)) * s.right_degree(b);
  }
  return total;
}

bool is_semi_join_reduced(const IndexedRelation& r, const IndexedRelation& s) {
  std::size_t space = std::max(r.rev().key_space(), s.rev().key_space());
  for (ValueId b = 0; b < space; ++b) {
    if ((r.right_degree(b) > 0) != (s.right_degree(b) > 0)) return false;
  }
  return true;
}

}  // namespace mmjoin
