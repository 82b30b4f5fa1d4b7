#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mmjoin/error.hpp"
#include "mmjoin/matmul.hpp"

namespace mmjoin {

KeyTable KeyTable::of(std::span<const ValueId> ids) {
  KeyTable t(1);
  t.ids_.assign(ids.begin(), ids.end());
  return t;
}

CountMatrix::CountMatrix(std::size_t rows, std::size_t cols, std::vector<Count> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) throw std::invalid_argument("matrix data length != rows*cols");
}

Count CountMatrix::max_entry() const {
  return data_.empty() ? 0 : *std::max_element(data_.begin(), data_.end());
}

CountMatrix CountMatrix::identity(std::size_t n) {
  CountMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

namespace {

template <typename Acc>
void multiply_rows(const Count* a, const Count* b, Acc* c, std::size_t row_begin,
                   std::size_t row_end, std::size_t inner, std::size_t cols, std::size_t block) {
  if (block == 0) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      Acc* out = c + i * cols;
      for (std::size_t k = 0; k < inner; ++k) {
        Acc scale = a[i * inner + k];
        if (scale == 0) continue;
        const Count* in = b + k * cols;
        for (std::size_t j = 0; j < cols; ++j) out[j] += scale * in[j];
      }
    }
    return;
  }
  for (std::size_t ii = row_begin; ii < row_end; ii += block) {
    std::size_t i_end = std::min(ii + block, row_end);
    for (std::size_t kk = 0; kk < inner; kk += block) {
      std::size_t k_end = std::min(kk + block, inner);
      for (std::size_t jj = 0; jj < cols; jj += block) {
        std::size_t j_end = std::min(jj + block, cols);
        for (std::size_t i = ii; i < i_end; ++i) {
          Acc* out = c + i * cols;
          for (std::size_t k = kk; k < k_end; ++k) {
            Acc scale = a[i * inner + k];
            if (scale == 0) continue;
            const Count* in = b + k * cols;
            for (std::size_t j = jj; j < j_end; ++j) out[j] += scale * in[j];
          }
        }
      }
    }
  }
}

template <typename Acc>
void run_kernel(const CountMatrix& a, const CountMatrix& b, Acc* c, const MultiplyOptions& options) {
  std::size_t rows = a.rows();
  unsigned workers = std::max(1u, options.cores);
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(rows, 1)));
  auto body = [&](std::size_t begin, std::size_t end) {
    multiply_rows<Acc>(a.data().data(), b.data().data(), c, begin, end, a.cols(), b.cols(),
                       options.block);
  };
  if (workers <= 1) {
    body(0, rows);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t begin = rows * w / workers;
    std::size_t end = rows * (w + 1) / workers;
    pool.emplace_back(body, begin, end);
  }
}

}  // namespace

CountMatrix multiply_counts(const CountMatrix& a, const CountMatrix& b,
                            const MultiplyOptions& options) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
  }
  CountMatrix result(a.rows(), b.cols());
  result.row_keys = a.row_keys;
  result.col_keys = b.col_keys;
  if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0) return result;

  constexpr auto kMax = std::numeric_limits<Count>::max();
  long double bound = static_cast<long double>(a.cols()) * a.max_entry() * b.max_entry();
  if (bound <= kMax) {
    run_kernel<Count>(a, b, result.row(0).data(), options);
    return result;
  }

  // Worst case might not fit: accumulate wide and check every entry.
  std::vector<std::uint64_t> wide(a.rows() * b.cols(), 0);
  if (bound > static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
    throw OverflowError("count product bound exceeds 64 bits");
  }
  run_kernel<std::uint64_t>(a, b, wide.data(), options);
  for (std::size_t i = 0; i < wide.size(); ++i) {
    if (wide[i] > kMax) throw OverflowError("matrix product entry exceeds count capacity");
    result.row(0).data()[i] = static_cast<Count>(wide[i]);
  }
  return result;
}

double theoretical_cost(double u, double v, double w, double omega) {
  double beta = std::min({u, v, w});
  return u * v * w * std::pow(beta, omega - 3.0);
}

}  // namespace mmjoin
