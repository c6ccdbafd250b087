#include "sp3hex/linalg/sparse_lu.hpp"

#include <umfpack.h>

#include <cmath>
#include <string>
#include <vector>

namespace sp3hex::linalg {

// CSR arrays of A are the CSC arrays of A^T, so UMFPACK factorizes A^T and
// every solve uses the transposed system.
struct SparseLu::Impl {
  SparseMatrix a;
  void* numeric = nullptr;
  double control[UMFPACK_CONTROL];
  mutable std::vector<double> residual;
  mutable std::vector<double> correction;

  ~Impl() {
    if (numeric != nullptr) umfpack_di_free_numeric(&numeric);
  }

  void raw_solve(const double* b, double* x) const {
    double info[UMFPACK_INFO];
    const int status = umfpack_di_solve(UMFPACK_At, a.row_ptr.data(), a.col_idx.data(), a.values.data(), x, b,
                                        numeric, control, info);
    if (status < 0) {
      throw Error(ErrorCode::singular_matrix, "sparse LU solve failed (UMFPACK status " + std::to_string(status) + ")");
    }
  }
};

namespace {

[[noreturn]] void report_singular(void* numeric, int n) {
  int lnz = 0;
  int unz = 0;
  int rows = 0;
  int cols = 0;
  int nz_udiag = 0;
  umfpack_di_get_lunz(&lnz, &unz, &rows, &cols, &nz_udiag, numeric);
  std::vector<int> q(static_cast<std::size_t>(n));
  std::vector<double> d(static_cast<std::size_t>(n));
  std::string where = "unknown position";
  if (umfpack_di_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, q.data(), d.data(),
                             nullptr, nullptr, numeric) == UMFPACK_OK) {
    for (int k = 0; k < n; ++k) {
      if (d[static_cast<std::size_t>(k)] == 0.0 || !std::isfinite(d[static_cast<std::size_t>(k)])) {
        where = "row " + std::to_string(q[static_cast<std::size_t>(k)]) + " (pivot " + std::to_string(k) + ")";
        break;
      }
    }
  }
  throw Error(ErrorCode::singular_matrix,
              "matrix is numerically singular: zero pivot at " + where + "; try a different shift");
}

}  // namespace

SparseLu::SparseLu(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows != a.cols) throw Error(ErrorCode::invalid_argument, "LU needs a square matrix");
  if (a.rows == 0) throw Error(ErrorCode::invalid_argument, "LU of an empty matrix");
  impl_->a = a;
  umfpack_di_defaults(impl_->control);
  impl_->control[UMFPACK_IRSTEP] = 0;
  const int n = a.rows;
  const auto& m = impl_->a;
  double info[UMFPACK_INFO];
  void* symbolic = nullptr;
  // METIS gives less fill than AMD on these meshes; fall back if it is unavailable.
  impl_->control[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;
  int status = umfpack_di_symbolic(n, n, m.row_ptr.data(), m.col_idx.data(), m.values.data(), &symbolic,
                                   impl_->control, info);
  if (status != UMFPACK_OK) {
    impl_->control[UMFPACK_ORDERING] = UMFPACK_ORDERING_AMD;
    status = umfpack_di_symbolic(n, n, m.row_ptr.data(), m.col_idx.data(), m.values.data(), &symbolic,
                                 impl_->control, info);
  }
  if (status != UMFPACK_OK) {
    throw Error(ErrorCode::singular_matrix, "symbolic factorization failed (UMFPACK status " + std::to_string(status) + ")");
  }
  status = umfpack_di_numeric(m.row_ptr.data(), m.col_idx.data(), m.values.data(), symbolic, &impl_->numeric,
                              impl_->control, info);
  umfpack_di_free_symbolic(&symbolic);
  if (status == UMFPACK_WARNING_singular_matrix) report_singular(impl_->numeric, n);
  if (status != UMFPACK_OK) {
    throw Error(ErrorCode::singular_matrix, "numeric factorization failed (UMFPACK status " + std::to_string(status) + ")");
  }
  impl_->residual.resize(static_cast<std::size_t>(n));
  impl_->correction.resize(static_cast<std::size_t>(n));
}

SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

int SparseLu::size() const noexcept { return impl_->a.rows; }

void SparseLu::solve(std::span<const double> b, std::span<double> x) const {
  const auto n = static_cast<std::size_t>(size());
  if (b.size() != n || x.size() != n) throw Error(ErrorCode::invalid_argument, "LU solve: dimension mismatch");
  impl_->raw_solve(b.data(), x.data());
  // One step of iterative refinement.
  auto& r = impl_->residual;
  spmv(impl_->a, std::span<const double>(x.data(), n), r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  impl_->raw_solve(r.data(), impl_->correction.data());
  for (std::size_t i = 0; i < n; ++i) x[i] += impl_->correction[i];
}

std::size_t SparseLu::factor_nonzeros() const {
  int lnz = 0;
  int unz = 0;
  int rows = 0;
  int cols = 0;
  int nz_udiag = 0;
  umfpack_di_get_lunz(&lnz, &unz, &rows, &cols, &nz_udiag, impl_->numeric);
  return static_cast<std::size_t>(lnz) + static_cast<std::size_t>(unz);
}

}  // namespace sp3hex::linalg
