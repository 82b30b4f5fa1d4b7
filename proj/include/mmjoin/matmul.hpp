#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmjoin/relation.hpp"

namespace mmjoin {

using Count = std::uint32_t;

/// Row or column labels of a CountMatrix. Each key is a fixed-arity tuple
/// of value ids: arity 1 for plain values, >1 for the composite heavy-value
/// combinations of star queries.
class KeyTable {
 public:
  KeyTable() = default;
  explicit KeyTable(std::size_t arity) : arity_(arity) {}
  static KeyTable of(std::span<const ValueId> ids);

  void push(std::span<const ValueId> key) { ids_.insert(ids_.end(), key.begin(), key.end()); }
  void push(ValueId id) { ids_.push_back(id); }

  std::span<const ValueId> operator[](std::size_t i) const {
    return {ids_.data() + i * arity_, arity_};
  }
  std::size_t size() const { return arity_ == 0 ? 0 : ids_.size() / arity_; }
  std::size_t arity() const { return arity_; }

  friend bool operator==(const KeyTable&, const KeyTable&) = default;

 private:
  std::size_t arity_ = 1;
  std::vector<ValueId> ids_;
};

/// Dense row-major matrix of exact witness counts.
class CountMatrix {
 public:
  CountMatrix() = default;
  CountMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  CountMatrix(std::size_t rows, std::size_t cols, std::vector<Count> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Count& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Count at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const Count> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Count> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Count> data() const { return data_; }
  Count max_entry() const;

  KeyTable row_keys;
  KeyTable col_keys;

  static CountMatrix identity(std::size_t n);

  friend bool operator==(const CountMatrix& a, const CountMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Count> data_;
};

struct MultiplyOptions {
  unsigned cores = 1;
  // Tile edge for the blocked kernel; 0 selects the plain i-k-j loop.
  std::size_t block = 64;
};

/// Exact product A * B. The result carries A's row keys and B's column
/// keys. Output rows are split across `cores` threads; every thread owns
/// disjoint rows, so the result is independent of cores and block.
/// Throws std::invalid_argument on a dimension mismatch and OverflowError
/// when an entry would not fit in Count.
CountMatrix multiply_counts(const CountMatrix& a, const CountMatrix& b,
                            const MultiplyOptions& options = {});

/// M(U,V,W) = U*V*W * beta^(omega-3) with beta = min(U,V,W).
double theoretical_cost(double u, double v, double w, double omega);

/// Measured square-multiply times, keyed by (dimension, cores).
class CalibrationTable {
 public:
  void set(std::size_t dim, unsigned cores, double nanos) { entries_[{dim, cores}] = nanos; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::pair<std::size_t, unsigned>, double>& entries() const { return entries_; }
  double at(std::size_t dim, unsigned cores) const { return entries_.at({dim, cores}); }

  /// Per core count, replaces each time by the running maximum over
  /// increasing dimension so the table is nondecreasing in dimension.
  void make_monotone();

  void save(std::ostream& out) const;
  static CalibrationTable load(std::istream& in);
  void save(const std::string& path) const;
  static CalibrationTable load(const std::string& path);

  friend bool operator==(const CalibrationTable&, const CalibrationTable&) = default;

 private:
  std::map<std::pair<std::size_t, unsigned>, double> entries_;
};

struct CalibrationConfig {
  std::vector<std::size_t> probe_dims{64, 128, 256, 384};
  std::vector<unsigned> cores{1};
  unsigned runs = 3;
  std::uint64_t seed = 42;
  // Largest probe allowed, in bytes for the three operand/result matrices.
  std::size_t memory_budget = std::size_t{1} << 30;

  /// Twenty dimensions p in {50, 100, ..., 1000} on 1..5 cores.
  static CalibrationConfig wide();
};

/// Times multiply_counts on random 0/1 square matrices; median of
/// config.runs repetitions per grid point, then made monotone.
CalibrationTable calibrate(const CalibrationConfig& config = {});

/// Nanoseconds for a u x v by v x w multiply on `cores` cores: the entry at
/// the nearest probe dimension to cbrt(u*v*w) and the nearest core count,
/// scaled by u*v*w / p^3.
double estimate_runtime(const CalibrationTable& table, double u, double v, double w, unsigned cores);

}  // namespace mmjoin
