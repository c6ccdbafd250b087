#include "sp3hex/fem/sparse.hpp"

#include <limits>
#include <numeric>

namespace sp3hex {

SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw Error(ErrorCode::invalid_argument, "triplet index out of range");
    }
  }
  // Stable sort keeps input order among duplicates so summation order is fixed.
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (std::size_t k = 0; k < triplets.size();) {
    const auto& t = triplets[k];
    double sum = 0.0;
    std::size_t l = k;
    while (l < triplets.size() && triplets[l].row == t.row && triplets[l].col == t.col) {
      sum += triplets[l].value;
      ++l;
    }
    m.col_idx.push_back(t.col);
    m.values.push_back(sum);
    ++m.row_ptr[static_cast<std::size_t>(t.row) + 1];
    k = l;
  }
  std::partial_sum(m.row_ptr.begin(), m.row_ptr.end(), m.row_ptr.begin());
  return m;
}

SparseMatrix identity_matrix(int n) {
  SparseMatrix m;
  m.rows = n;
  m.cols = n;
  m.row_ptr.resize(static_cast<std::size_t>(n) + 1);
  std::iota(m.row_ptr.begin(), m.row_ptr.end(), 0);
  m.col_idx.resize(static_cast<std::size_t>(n));
  std::iota(m.col_idx.begin(), m.col_idx.end(), 0);
  m.values.assign(static_cast<std::size_t>(n), 1.0);
  return m;
}

SparseMatrix transpose(const SparseMatrix& a) {
  SparseMatrix t;
  t.rows = a.cols;
  t.cols = a.rows;
  t.row_ptr.assign(static_cast<std::size_t>(a.cols) + 1, 0);
  for (int c : a.col_idx) ++t.row_ptr[static_cast<std::size_t>(c) + 1];
  std::partial_sum(t.row_ptr.begin(), t.row_ptr.end(), t.row_ptr.begin());
  t.col_idx.resize(a.nnz());
  t.values.resize(a.nnz());
  std::vector<int> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = a.row_ptr[static_cast<std::size_t>(i)]; k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      const auto c = static_cast<std::size_t>(a.col_idx[static_cast<std::size_t>(k)]);
      const auto dst = static_cast<std::size_t>(next[c]++);
      t.col_idx[dst] = i;
      t.values[dst] = a.values[static_cast<std::size_t>(k)];
    }
  }
  return t;
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw Error(ErrorCode::invalid_argument, "sparse add: dimension mismatch");
  }
  SparseMatrix c;
  c.rows = a.rows;
  c.cols = a.cols;
  c.row_ptr.assign(static_cast<std::size_t>(a.rows) + 1, 0);
  c.col_idx.reserve(std::max(a.nnz(), b.nnz()));
  c.values.reserve(std::max(a.nnz(), b.nnz()));
  for (int i = 0; i < a.rows; ++i) {
    auto ka = static_cast<std::size_t>(a.row_ptr[static_cast<std::size_t>(i)]);
    const auto ea = static_cast<std::size_t>(a.row_ptr[static_cast<std::size_t>(i) + 1]);
    auto kb = static_cast<std::size_t>(b.row_ptr[static_cast<std::size_t>(i)]);
    const auto eb = static_cast<std::size_t>(b.row_ptr[static_cast<std::size_t>(i) + 1]);
    while (ka < ea || kb < eb) {
      const int ca = ka < ea ? a.col_idx[ka] : a.cols;
      const int cb = kb < eb ? b.col_idx[kb] : b.cols;
      if (ca == cb) {
        c.col_idx.push_back(ca);
        c.values.push_back(alpha * a.values[ka++] + beta * b.values[kb++]);
      } else if (ca < cb) {
        c.col_idx.push_back(ca);
        c.values.push_back(alpha * a.values[ka++]);
      } else {
        c.col_idx.push_back(cb);
        c.values.push_back(beta * b.values[kb++]);
      }
    }
    c.row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(c.col_idx.size());
  }
  return c;
}

SparseMatrix scaled(const SparseMatrix& a, double alpha) {
  SparseMatrix c = a;
  for (auto& v : c.values) v *= alpha;
  return c;
}

bool same_pattern(const SparseMatrix& a, const SparseMatrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.row_ptr == b.row_ptr && a.col_idx == b.col_idx;
}

double norm_inf(const SparseMatrix& a) {
  double best = 0.0;
  for (int i = 0; i < a.rows; ++i) {
    double row = 0.0;
    for (int k = a.row_ptr[static_cast<std::size_t>(i)]; k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      row += std::abs(a.values[static_cast<std::size_t>(k)]);
    }
    best = std::max(best, row);
  }
  return best;
}

double norm_frobenius(const SparseMatrix& a) {
  double sum = 0.0;
  for (double v : a.values) sum += v * v;
  return std::sqrt(sum);
}

double asymmetry(const SparseMatrix& a) {
  if (a.rows != a.cols) return std::numeric_limits<double>::infinity();
  const SparseMatrix d = add(a, transpose(a), 1.0, -1.0);
  double worst = 0.0;
  for (double v : d.values) worst = std::max(worst, std::abs(v));
  return worst;
}

namespace {

template <typename T>
void spmv_impl(const SparseMatrix& a, std::span<const T> x, std::span<T> y, Execution exec) {
  if (x.size() != static_cast<std::size_t>(a.cols) || y.size() != static_cast<std::size_t>(a.rows)) {
    throw Error(ErrorCode::invalid_argument, "spmv: dimension mismatch");
  }
  const int* rp = a.row_ptr.data();
  const int* ci = a.col_idx.data();
  const double* va = a.values.data();
  const T* xp = x.data();
  T* yp = y.data();
  const int n = a.rows;
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      T sum{};
      for (int k = rp[i]; k < rp[i + 1]; ++k) sum += va[k] * xp[ci[k]];
      yp[i] = sum;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      T sum{};
      for (int k = rp[i]; k < rp[i + 1]; ++k) sum += va[k] * xp[ci[k]];
      yp[i] = sum;
    }
  }
}

}  // namespace

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y, Execution exec) {
  spmv_impl<double>(a, x, y, exec);
}

void spmv(const SparseMatrix& a, std::span<const std::complex<double>> x,
          std::span<std::complex<double>> y, Execution exec) {
  spmv_impl<std::complex<double>>(a, x, y, exec);
}

std::vector<double> to_dense(const SparseMatrix& a) {
  std::vector<double> d(static_cast<std::size_t>(a.rows) * static_cast<std::size_t>(a.cols), 0.0);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = a.row_ptr[static_cast<std::size_t>(i)]; k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      d[static_cast<std::size_t>(i) * static_cast<std::size_t>(a.cols) +
        static_cast<std::size_t>(a.col_idx[static_cast<std::size_t>(k)])] += a.values[static_cast<std::size_t>(k)];
    }
  }
  return d;
}

std::vector<bool> nonzero_rows(const SparseMatrix& a) {
  std::vector<bool> out(static_cast<std::size_t>(a.rows), false);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = a.row_ptr[static_cast<std::size_t>(i)]; k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      if (a.values[static_cast<std::size_t>(k)] != 0.0) {
        out[static_cast<std::size_t>(i)] = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace sp3hex

namespace sp3hex {

SparseMatrix block_matrix(const std::vector<std::vector<BlockRef>>& blocks) {
  const std::size_t nbr = blocks.size();
  const std::size_t nbc = nbr > 0 ? blocks[0].size() : 0;
  std::vector<int> heights(nbr, -1);
  std::vector<int> widths(nbc, -1);
  for (std::size_t i = 0; i < nbr; ++i) {
    if (blocks[i].size() != nbc) throw Error(ErrorCode::invalid_argument, "block_matrix: ragged block rows");
    for (std::size_t j = 0; j < nbc; ++j) {
      const SparseMatrix* m = blocks[i][j].matrix;
      if (m == nullptr) continue;
      if ((heights[i] >= 0 && heights[i] != m->rows) || (widths[j] >= 0 && widths[j] != m->cols)) {
        throw Error(ErrorCode::invalid_argument, "block_matrix: inconsistent block sizes");
      }
      heights[i] = m->rows;
      widths[j] = m->cols;
    }
  }
  for (int h : heights) {
    if (h < 0) throw Error(ErrorCode::invalid_argument, "block_matrix: empty block row");
  }
  for (int w : widths) {
    if (w < 0) throw Error(ErrorCode::invalid_argument, "block_matrix: empty block column");
  }
  std::vector<int> col_offset(nbc + 1, 0);
  for (std::size_t j = 0; j < nbc; ++j) col_offset[j + 1] = col_offset[j] + widths[j];

  SparseMatrix out;
  out.cols = col_offset[nbc];
  for (int h : heights) out.rows += h;
  out.row_ptr.assign(static_cast<std::size_t>(out.rows) + 1, 0);
  std::size_t row = 0;
  for (std::size_t i = 0; i < nbr; ++i) {
    for (int r = 0; r < heights[i]; ++r, ++row) {
      int len = 0;
      for (std::size_t j = 0; j < nbc; ++j) {
        const SparseMatrix* m = blocks[i][j].matrix;
        if (m != nullptr) len += m->row_ptr[static_cast<std::size_t>(r) + 1] - m->row_ptr[static_cast<std::size_t>(r)];
      }
      out.row_ptr[row + 1] = out.row_ptr[row] + len;
    }
  }
  out.col_idx.resize(static_cast<std::size_t>(out.row_ptr.back()));
  out.values.resize(out.col_idx.size());
  row = 0;
  for (std::size_t i = 0; i < nbr; ++i) {
    for (int r = 0; r < heights[i]; ++r, ++row) {
      auto pos = static_cast<std::size_t>(out.row_ptr[row]);
      for (std::size_t j = 0; j < nbc; ++j) {
        const SparseMatrix* m = blocks[i][j].matrix;
        if (m == nullptr) continue;
        const double s = blocks[i][j].scale;
        for (int p = m->row_ptr[static_cast<std::size_t>(r)]; p < m->row_ptr[static_cast<std::size_t>(r) + 1]; ++p) {
          out.col_idx[pos] = col_offset[j] + m->col_idx[static_cast<std::size_t>(p)];
          out.values[pos] = s * m->values[static_cast<std::size_t>(p)];
          ++pos;
        }
      }
    }
  }
  return out;
}

}  // namespace sp3hex
