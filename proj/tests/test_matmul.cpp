#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mmjoin/error.hpp"
#include "mmjoin/matmul.hpp"
#include "oracles.hpp"

using namespace mmjoin;

namespace {

CountMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, Count max) {
  CountMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rng() % 3 == 0 ? 0 : rng() % (max + 1);
  return m;
}

std::vector<std::vector<std::uint64_t>> dense(const CountMatrix& m) {
  std::vector<std::vector<std::uint64_t>> d(m.rows(), std::vector<std::uint64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m.at(i, j);
  return d;
}

}  // namespace

TEST(Multiply, MatchesTripleLoop) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t u = 1 + rng() % 70, v = 1 + rng() % 70, w = 1 + rng() % 70;
    CountMatrix a = random_matrix(rng, u, v, 3), b = random_matrix(rng, v, w, 3);
    auto want = oracle::matmul(dense(a), dense(b));
    for (std::size_t block : {0u, 8u, 64u}) {
      CountMatrix c = multiply_counts(a, b, {.cores = 1, .block = block});
      ASSERT_EQ(dense(c), want) << u << "x" << v << "x" << w << " block " << block;
    }
  }
}

TEST(Multiply, IndependentOfCores) {
  std::mt19937_64 rng(6);
  CountMatrix a = random_matrix(rng, 301, 77, 1), b = random_matrix(rng, 77, 123, 1);
  CountMatrix one = multiply_counts(a, b, {.cores = 1});
  for (unsigned cores : {2u, 3u, 8u}) EXPECT_EQ(multiply_counts(a, b, {.cores = cores}), one);
}

TEST(Multiply, KeysCarriedThrough) {
  CountMatrix a(2, 1), b(1, 3);
  a.row_keys = KeyTable::of(std::vector<ValueId>{7, 9});
  b.col_keys = KeyTable::of(std::vector<ValueId>{1, 2, 3});
  CountMatrix c = multiply_counts(a, b);
  EXPECT_EQ(c.row_keys, a.row_keys);
  EXPECT_EQ(c.col_keys, b.col_keys);
}

TEST(Multiply, DimensionMismatchThrows) {
  EXPECT_THROW(multiply_counts(CountMatrix(2, 3), CountMatrix(2, 3)), std::invalid_argument);
}

TEST(Multiply, LargeEntriesUseWideFallback) {
  CountMatrix a(1, 2), b(2, 1);
  a.at(0, 0) = 70000;
  a.at(0, 1) = 1;
  b.at(0, 0) = 60000;
  b.at(1, 0) = 5;
  EXPECT_EQ(multiply_counts(a, b).at(0, 0), 70000u * 60000u + 5u);
  a.at(0, 1) = 70000;
  b.at(1, 0) = 60000;
  EXPECT_THROW(multiply_counts(a, b), OverflowError);
}

TEST(Multiply, IdentityIsNeutral) {
  std::mt19937_64 rng(2);
  CountMatrix a = random_matrix(rng, 5, 7, 4);
  EXPECT_EQ(multiply_counts(a, CountMatrix::identity(7)), a);
}

TEST(Cost, TheoreticalCost) {
  EXPECT_DOUBLE_EQ(theoretical_cost(10, 10, 10, 3), 1000);
  EXPECT_DOUBLE_EQ(theoretical_cost(10, 100, 10, 2), 1000);
}

TEST(Calibration, SaveLoadRoundTrip) {
  CalibrationTable t;
  t.set(64, 1, 1000);
  t.set(128, 1, 7001);
  t.set(64, 2, 600);
  std::stringstream io;
  t.save(io);
  EXPECT_EQ(CalibrationTable::load(io), t);
  std::istringstream bad("64\t1\t5\n");
  EXPECT_THROW(CalibrationTable::load(bad), CalibrationError);
}

TEST(Calibration, MonotoneAndEstimate) {
  CalibrationTable t;
  t.set(100, 1, 1e6);
  t.set(200, 1, 5e5);
  t.set(400, 1, 6.4e7);
  t.make_monotone();
  EXPECT_DOUBLE_EQ(t.at(200, 1), 1e6);
  // cbrt(100^3) = 100: exact probe, no scaling
  EXPECT_DOUBLE_EQ(estimate_runtime(t, 100, 100, 100, 1), 1e6);
  // nearest probe to 350 is 400; scaled by (350/400)^3
  EXPECT_NEAR(estimate_runtime(t, 350, 350, 350, 1), 6.4e7 * 0.669921875, 1);
  EXPECT_THROW(estimate_runtime(CalibrationTable{}, 1, 1, 1, 1), CalibrationError);
}

TEST(Calibration, MeasuresEveryGridPoint) {
  CalibrationConfig cfg;
  cfg.probe_dims = {16, 32};
  cfg.cores = {1, 2};
  cfg.runs = 3;
  CalibrationTable t = calibrate(cfg);
  EXPECT_EQ(t.size(), 4u);
  for (const auto& [key, ns] : t.entries()) EXPECT_GT(ns, 0);
  EXPECT_LE(t.at(16, 1), t.at(32, 1));
}
