#pragma once

#include "sp3hex/fem/sparse.hpp"

#include <memory>
#include <span>

namespace sp3hex::linalg {

/// Sparse LU factorization of a square real matrix (UMFPACK backend).
///
/// Each solve applies one step of iterative refinement against the original
/// matrix. A numerically singular matrix raises ErrorCode::singular_matrix with
/// the row whose pivot vanished.
class SparseLu {
 public:
  explicit SparseLu(const SparseMatrix& a);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;
  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;

  [[nodiscard]] int size() const noexcept;

  /// x = A^-1 b. `b` and `x` must not alias.
  void solve(std::span<const double> b, std::span<double> x) const;

  /// Entries of L and U, for diagnostics.
  [[nodiscard]] std::size_t factor_nonzeros() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sp3hex::linalg
