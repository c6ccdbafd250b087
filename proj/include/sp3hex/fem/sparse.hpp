#pragma once

#include "sp3hex/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace sp3hex {

/// Kernel execution policy. Both policies produce bit-identical results.
enum class Execution { serial, parallel };

/// Compressed sparse rows with sorted, unique column indices per row.
template <typename Scalar>
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col_idx;
  std::vector<Scalar> values;

  [[nodiscard]] std::size_t nnz() const noexcept { return col_idx.size(); }

  /// Entry (i, j) or zero when outside the pattern.
  [[nodiscard]] Scalar at(int i, int j) const {
    const auto begin = col_idx.begin() + row_ptr[static_cast<std::size_t>(i)];
    const auto end = col_idx.begin() + row_ptr[static_cast<std::size_t>(i) + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return Scalar{};
    return values[static_cast<std::size_t>(it - col_idx.begin())];
  }
};

using SparseMatrix = CsrMatrix<double>;

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Sums duplicate (row, col) entries in input order.
[[nodiscard]] SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

[[nodiscard]] SparseMatrix identity_matrix(int n);
[[nodiscard]] SparseMatrix transpose(const SparseMatrix& a);

/// alpha * a + beta * b on the union pattern; exact zeros are kept.
[[nodiscard]] SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0,
                               double beta = 1.0);

[[nodiscard]] SparseMatrix scaled(const SparseMatrix& a, double alpha);

/// Same rows/cols and pattern; values are compared exactly.
[[nodiscard]] bool same_pattern(const SparseMatrix& a, const SparseMatrix& b);

[[nodiscard]] double norm_inf(const SparseMatrix& a);
[[nodiscard]] double norm_frobenius(const SparseMatrix& a);

/// Largest |a_ij - a_ji| over all entries.
[[nodiscard]] double asymmetry(const SparseMatrix& a);

/// y = A x.
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y,
          Execution exec = Execution::parallel);
void spmv(const SparseMatrix& a, std::span<const std::complex<double>> x,
          std::span<std::complex<double>> y, Execution exec = Execution::parallel);

struct BlockRef {
  const SparseMatrix* matrix = nullptr;
  double scale = 1.0;
};

/// Stacks scaled blocks; null entries are zero blocks. Every block row and
/// column needs at least one non-null block to fix its size.
[[nodiscard]] SparseMatrix block_matrix(const std::vector<std::vector<BlockRef>>& blocks);

/// Dense row-major copy; intended for small test problems.
[[nodiscard]] std::vector<double> to_dense(const SparseMatrix& a);

/// Rows and columns with at least one nonzero value.
[[nodiscard]] std::vector<bool> nonzero_rows(const SparseMatrix& a);

}  // namespace sp3hex
