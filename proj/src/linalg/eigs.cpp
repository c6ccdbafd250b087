#include "sp3hex/linalg/eigs.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

extern "C" void dtrsen_(const char* job, const char* compq, const lapack_logical* select, const lapack_int* n,
                        double* t, const lapack_int* ldt, double* q, const lapack_int* ldq, double* wr, double* wi,
                        lapack_int* m, double* s, double* sep, double* work, const lapack_int* lwork,
                        lapack_int* iwork, const lapack_int* liwork, lapack_int* info, std::size_t, std::size_t);

namespace sp3hex::linalg {
namespace {

using Matrix = std::vector<double>;  // column-major

double* col(Matrix& m, std::size_t ld, int j) { return m.data() + ld * static_cast<std::size_t>(j); }
const double* col(const Matrix& m, std::size_t ld, int j) { return m.data() + ld * static_cast<std::size_t>(j); }

double norm2(const double* x, int n) { return cblas_dnrm2(n, x, 1); }

// Classical Gram-Schmidt applied twice (DGKS); accumulates coefficients in h.
void orthogonalize(const double* basis, int n, int j, double* w, double* h) {
  std::fill(h, h + j, 0.0);
  if (j == 0) return;
  std::vector<double> c(static_cast<std::size_t>(j));
  for (int pass = 0; pass < 2; ++pass) {
    cblas_dgemv(CblasColMajor, CblasTrans, n, j, 1.0, basis, n, w, 1, 0.0, c.data(), 1);
    cblas_dgemv(CblasColMajor, CblasNoTrans, n, j, -1.0, basis, n, c.data(), 1, 1.0, w, 1);
    for (int i = 0; i < j; ++i) h[i] += c[static_cast<std::size_t>(i)];
  }
}

class RandomSource {
 public:
  void fill(double* x, int n) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int i = 0; i < n; ++i) x[i] = d(rng_);
  }

 private:
  std::mt19937_64 rng_{0x5eedULL};
};

// Fills column j of the basis with a unit vector orthogonal to columns 0..j-1.
bool fresh_direction(Matrix& v, int n, int j, RandomSource& rng) {
  std::vector<double> h(static_cast<std::size_t>(j) + 1);
  double* w = col(v, static_cast<std::size_t>(n), j);
  for (int attempt = 0; attempt < 5; ++attempt) {
    rng.fill(w, n);
    const double before = norm2(w, n);
    orthogonalize(v.data(), n, j, w, h.data());
    const double after = norm2(w, n);
    if (after > 1e-8 * before) {
      cblas_dscal(n, 1.0 / after, w, 1);
      return true;
    }
  }
  return false;
}

struct SchurForm {
  int m = 0;
  Matrix t;  // m x m quasi-triangular
  Matrix q;  // m x m orthogonal
  std::vector<double> wr;
  std::vector<double> wi;
};

SchurForm real_schur(const Matrix& h, int ldh, int m) {
  SchurForm s;
  s.m = m;
  s.t.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      s.t[static_cast<std::size_t>(j * m + i)] = h[static_cast<std::size_t>(j * ldh + i)];
    }
  }
  s.q.assign(s.t.size(), 0.0);
  s.wr.assign(static_cast<std::size_t>(m), 0.0);
  s.wi.assign(static_cast<std::size_t>(m), 0.0);
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, m, s.t.data(), m, &sdim,
                                        s.wr.data(), s.wi.data(), s.q.data(), m);
  if (info != 0) {
    throw Error(ErrorCode::no_convergence, "dense Schur decomposition failed (dgees info " + std::to_string(info) + ")");
  }
  return s;
}

Matrix schur_eigenvectors(const SchurForm& s) {
  Matrix t = s.t;
  Matrix y(t.size(), 0.0);
  lapack_int used = 0;
  const lapack_int info = LAPACKE_dtrevc(LAPACK_COL_MAJOR, 'R', 'A', nullptr, s.m, t.data(), s.m, nullptr, 1,
                                         y.data(), s.m, s.m, &used);
  if (info != 0) {
    throw Error(ErrorCode::no_convergence, "Schur eigenvectors failed (dtrevc info " + std::to_string(info) + ")");
  }
  return y;
}

// Moves the selected eigenvalues to the leading block; returns false if LAPACK
// could not reorder (the form is left unchanged in that case).
bool reorder(SchurForm& s, const std::vector<bool>& selected) {
  std::vector<lapack_logical> sel(static_cast<std::size_t>(s.m));
  for (int i = 0; i < s.m; ++i) sel[static_cast<std::size_t>(i)] = selected[static_cast<std::size_t>(i)] ? 1 : 0;
  // Called directly: the LAPACKE wrapper crashes on some builds for job = 'N'.
  lapack_int count = 0;
  double cond = 0.0;
  double sep = 0.0;
  const lapack_int n = s.m;
  const lapack_int lwork = std::max(1, n * n);
  const lapack_int liwork = std::max(1, n * n);
  std::vector<double> work(static_cast<std::size_t>(lwork));
  std::vector<lapack_int> iwork(static_cast<std::size_t>(liwork));
  lapack_int info = 0;
  dtrsen_("N", "V", sel.data(), &n, s.t.data(), &n, s.q.data(), &n, s.wr.data(), s.wi.data(), &count, &cond, &sep,
          work.data(), &lwork, iwork.data(), &liwork, &info, 1, 1);
  return info == 0;
}

// Eigenvalue indices ordered by decreasing modulus, conjugate pairs adjacent
// (positive imaginary part first).
std::vector<int> by_modulus(const SchurForm& s) {
  std::vector<int> heads;
  for (int i = 0; i < s.m; ++i) {
    if (s.wi[static_cast<std::size_t>(i)] < 0.0) continue;  // second member of a pair
    heads.push_back(i);
  }
  std::stable_sort(heads.begin(), heads.end(), [&](int a, int b) {
    const double ma = std::hypot(s.wr[static_cast<std::size_t>(a)], s.wi[static_cast<std::size_t>(a)]);
    const double mb = std::hypot(s.wr[static_cast<std::size_t>(b)], s.wi[static_cast<std::size_t>(b)]);
    if (ma != mb) return ma > mb;
    return s.wr[static_cast<std::size_t>(a)] > s.wr[static_cast<std::size_t>(b)];
  });
  std::vector<int> order;
  for (int i : heads) {
    order.push_back(i);
    if (s.wi[static_cast<std::size_t>(i)] > 0.0) order.push_back(i + 1);
  }
  return order;
}

// Number of leading entries of `order` covering `count` values without splitting a pair.
int whole_pairs(const SchurForm& s, const std::vector<int>& order, int count) {
  count = std::min<int>(count, static_cast<int>(order.size()));
  if (count > 0 && count < static_cast<int>(order.size()) &&
      s.wi[static_cast<std::size_t>(order[static_cast<std::size_t>(count - 1)])] > 0.0) {
    ++count;
  }
  return count;
}

// Ritz residual estimates |b^T y| / ||y|| for every eigenvalue of the Schur form.
std::vector<double> ritz_estimates(const SchurForm& s, const Matrix& y, const std::vector<double>& b) {
  const int m = s.m;
  std::vector<double> est(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    const double* yr = col(y, static_cast<std::size_t>(m), i);
    const double wi = s.wi[static_cast<std::size_t>(i)];
    if (wi == 0.0) {
      est[static_cast<std::size_t>(i)] = std::abs(cblas_ddot(m, b.data(), 1, yr, 1)) / norm2(yr, m);
    } else if (wi > 0.0) {
      const double* yi = col(y, static_cast<std::size_t>(m), i + 1);
      const double re = cblas_ddot(m, b.data(), 1, yr, 1);
      const double im = cblas_ddot(m, b.data(), 1, yi, 1);
      const double nrm = std::hypot(norm2(yr, m), norm2(yi, m));
      est[static_cast<std::size_t>(i)] = std::hypot(re, im) / nrm;
      est[static_cast<std::size_t>(i) + 1] = est[static_cast<std::size_t>(i)];
    }
  }
  return est;
}

// b^T Q for the residual row b of the Krylov-Schur relation.
std::vector<double> project_row(const Matrix& h, int ldh, int m, const Matrix& q) {
  std::vector<double> row(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) row[static_cast<std::size_t>(j)] = h[static_cast<std::size_t>(j * ldh + m)];
  std::vector<double> out(static_cast<std::size_t>(m));
  cblas_dgemv(CblasColMajor, CblasTrans, m, m, 1.0, q.data(), m, row.data(), 1, 0.0, out.data(), 1);
  return out;
}

// V[:, 0..k) <- V[:, 0..m) Q[:, 0..k), V[:, k] <- V[:, m].
void rotate_basis(Matrix& v, int n, int m, const Matrix& q, int k) {
  Matrix tmp(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, k, m, 1.0, v.data(), n, q.data(), m, 0.0, tmp.data(), n);
  std::copy(tmp.begin(), tmp.end(), v.begin());
  std::copy(col(v, static_cast<std::size_t>(n), m), col(v, static_cast<std::size_t>(n), m) + n,
            col(v, static_cast<std::size_t>(n), k));
}

}  // namespace

Which parse_which(std::string_view text) {
  if (text == "nearest-shift") return Which::nearest_shift;
  if (text == "smallest-real") return Which::smallest_real;
  if (text == "largest-real") return Which::largest_real;
  throw Error(ErrorCode::invalid_argument, "unknown eigenvalue ordering '" + std::string(text) + "'");
}

RitzResult krylov_schur(const LinearOperator& op, int n, const EigsOptions& options) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "eigensolver needs a non-empty operator");
  if (options.nev < 1) throw Error(ErrorCode::invalid_argument, "nev must be at least 1");
  if (options.nev > n) throw Error(ErrorCode::invalid_argument, "nev exceeds the problem dimension");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  const int nev = options.nev;
  int m = options.subspace > 0 ? options.subspace : std::max(2 * nev + 8, 20);
  m = std::min(std::max(m, nev + 2), n);
  const auto ldv = static_cast<std::size_t>(n);
  const int ldh = m + 1;

  Matrix v(ldv * static_cast<std::size_t>(m + 1), 0.0);
  Matrix h(static_cast<std::size_t>(ldh) * static_cast<std::size_t>(m), 0.0);
  RandomSource rng;

  double* v0 = col(v, ldv, 0);
  if (options.seed.empty()) {
    std::fill(v0, v0 + n, 1.0);
  } else {
    if (options.seed.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::invalid_argument, "seed vector has the wrong length");
    }
    std::copy(options.seed.begin(), options.seed.end(), v0);
  }
  const double seed_norm = norm2(v0, n);
  if (!(seed_norm > 0.0)) throw Error(ErrorCode::invalid_argument, "seed vector is zero");
  cblas_dscal(n, 1.0 / seed_norm, v0, 1);

  RitzResult result;
  std::vector<double> hcol(static_cast<std::size_t>(m) + 1);
  int k = 0;
  int verify_passes = options.verify_multiplicity && m < n ? 2 : 0;
  std::vector<Complex> previous;
  int cycle = 0;

  for (;;) {
    // Expand the Krylov-Schur decomposition from k to m columns.
    int m_eff = m;
    for (int j = k; j < m; ++j) {
      double* w = col(v, ldv, j + 1);
      op(std::span<const double>(col(v, ldv, j), ldv), std::span<double>(w, ldv));
      ++result.operator_applications;
      const double before = norm2(w, n);
      orthogonalize(v.data(), n, j + 1, w, hcol.data());
      for (int i = 0; i <= j; ++i) h[static_cast<std::size_t>(j * ldh + i)] = hcol[static_cast<std::size_t>(i)];
      const double beta = norm2(w, n);
      if (beta > 1e-13 * before && beta > 0.0) {
        h[static_cast<std::size_t>(j * ldh + j + 1)] = beta;
        cblas_dscal(n, 1.0 / beta, w, 1);
        continue;
      }
      // Invariant subspace found.
      h[static_cast<std::size_t>(j * ldh + j + 1)] = 0.0;
      if (j + 1 == n || !fresh_direction(v, n, j + 1, rng)) {
        m_eff = j + 1;
        break;
      }
    }

    SchurForm s = real_schur(h, ldh, m_eff);
    std::vector<double> b = m_eff < m ? std::vector<double>(static_cast<std::size_t>(m_eff), 0.0)
                                      : project_row(h, ldh, m_eff, s.q);
    const Matrix y = schur_eigenvectors(s);
    const auto est = ritz_estimates(s, y, b);
    const auto order = by_modulus(s);
    const int wanted = whole_pairs(s, order, nev);

    bool converged = true;
    for (int w = 0; w < wanted; ++w) {
      const auto i = static_cast<std::size_t>(order[static_cast<std::size_t>(w)]);
      if (!(est[i] <= options.tol * std::hypot(s.wr[i], s.wi[i]))) converged = false;
    }
    const bool exhausted = m_eff < m || m == n;
    if (converged && !exhausted && verify_passes > 0) {
      // Lock the converged wanted Schur vectors and continue from a fresh direction.
      std::vector<Complex> current;
      for (int w = 0; w < wanted; ++w) {
        const auto i = static_cast<std::size_t>(order[static_cast<std::size_t>(w)]);
        current.emplace_back(s.wr[i], s.wi[i]);
      }
      bool changed = current.size() != previous.size();
      for (std::size_t i = 0; !changed && i < current.size(); ++i) {
        changed = std::abs(current[i] - previous[i]) > 1e3 * options.tol * std::abs(current[i]);
      }
      if (changed || previous.empty()) {
        previous = current;
        --verify_passes;
        std::vector<bool> sel(static_cast<std::size_t>(m_eff), false);
        for (int w = 0; w < wanted; ++w) sel[static_cast<std::size_t>(order[static_cast<std::size_t>(w)])] = true;
        if (reorder(s, sel) && wanted + 1 < m) {
          rotate_basis(v, n, m_eff, s.q, wanted);
          std::fill(h.begin(), h.end(), 0.0);
          for (int j = 0; j < wanted; ++j) {
            for (int i = 0; i < wanted; ++i) {
              h[static_cast<std::size_t>(j * ldh + i)] = s.t[static_cast<std::size_t>(j * m_eff + i)];
            }
          }
          if (fresh_direction(v, n, wanted, rng)) {
            k = wanted;
            continue;
          }
        }
      }
    }

    if (converged || exhausted || cycle >= options.max_restarts) {
      result.converged = converged || exhausted;
      // Ritz vectors X = V Q Y for the wanted values.
      Matrix qy(static_cast<std::size_t>(m_eff) * static_cast<std::size_t>(m_eff));
      cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, m_eff, m_eff, m_eff, 1.0, s.q.data(), m_eff, y.data(),
                  m_eff, 0.0, qy.data(), m_eff);
      std::vector<double> xr(ldv);
      std::vector<double> xi(ldv);
      for (int w = 0; w < wanted; ++w) {
        const int i = order[static_cast<std::size_t>(w)];
        const double wr = s.wr[static_cast<std::size_t>(i)];
        const double wi = s.wi[static_cast<std::size_t>(i)];
        std::vector<Complex> x(ldv);
        if (wi == 0.0) {
          cblas_dgemv(CblasColMajor, CblasNoTrans, n, m_eff, 1.0, v.data(), n, col(qy, static_cast<std::size_t>(m_eff), i),
                      1, 0.0, xr.data(), 1);
          const double nrm = norm2(xr.data(), n);
          for (std::size_t r = 0; r < ldv; ++r) x[r] = xr[r] / nrm;
        } else {
          // Pair (i, i+1) for wi > 0; the conjugate (wi < 0) uses the same columns.
          const int head = wi > 0.0 ? i : i - 1;
          const double sign = wi > 0.0 ? 1.0 : -1.0;
          cblas_dgemv(CblasColMajor, CblasNoTrans, n, m_eff, 1.0, v.data(), n,
                      col(qy, static_cast<std::size_t>(m_eff), head), 1, 0.0, xr.data(), 1);
          cblas_dgemv(CblasColMajor, CblasNoTrans, n, m_eff, 1.0, v.data(), n,
                      col(qy, static_cast<std::size_t>(m_eff), head + 1), 1, 0.0, xi.data(), 1);
          const double nrm = std::hypot(norm2(xr.data(), n), norm2(xi.data(), n));
          for (std::size_t r = 0; r < ldv; ++r) x[r] = Complex(xr[r], sign * xi[r]) / nrm;
        }
        result.values.emplace_back(wr, wi);
        result.vectors.push_back(std::move(x));
        result.estimates.push_back(est[static_cast<std::size_t>(i)]);
      }
      return result;
    }

    // Restart: keep the nev + 4 Ritz values of largest modulus.
    int keep = whole_pairs(s, order, std::min(nev + 4, m_eff - 1));
    if (keep >= m_eff) keep -= 2;
    keep = std::max(keep, 1);
    std::vector<bool> sel(static_cast<std::size_t>(m_eff), false);
    for (int w = 0; w < keep; ++w) sel[static_cast<std::size_t>(order[static_cast<std::size_t>(w)])] = true;
    reorder(s, sel);
    b = project_row(h, ldh, m_eff, s.q);
    rotate_basis(v, n, m_eff, s.q, keep);
    std::fill(h.begin(), h.end(), 0.0);
    for (int j = 0; j < keep; ++j) {
      for (int i = 0; i < keep; ++i) h[static_cast<std::size_t>(j * ldh + i)] = s.t[static_cast<std::size_t>(j * m_eff + i)];
      h[static_cast<std::size_t>(j * ldh + keep)] = b[static_cast<std::size_t>(j)];
    }
    k = keep;
    ++cycle;
    if (previous.empty()) result.restarts = cycle;
  }
}

ShiftInvertOperator::ShiftInvertOperator(const SparseMatrix& a, const SparseMatrix& b, double sigma)
    : b_(&b), sigma_(sigma), lu_(sigma == 0.0 ? a : add(a, b, 1.0, -sigma)), work_(static_cast<std::size_t>(a.rows)) {
  if (a.rows != b.rows || a.cols != b.cols || a.rows != a.cols) {
    throw Error(ErrorCode::invalid_argument, "shift-invert: A and B must be square and of equal size");
  }
}

void ShiftInvertOperator::apply(std::span<const double> x, std::span<double> y) const {
  spmv(*b_, x, work_);
  lu_.solve(work_, y);
}

double backward_error(const SparseMatrix& a, const SparseMatrix& b, Complex lambda, std::span<const Complex> x) {
  std::vector<Complex> ax(x.size());
  std::vector<Complex> bx(x.size());
  spmv(a, x, ax);
  spmv(b, x, bx);
  double r2 = 0.0;
  double x2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    r2 += std::norm(ax[i] - lambda * bx[i]);
    x2 += std::norm(x[i]);
  }
  const double scale = (norm_inf(a) + std::abs(lambda) * norm_inf(b)) * std::sqrt(x2);
  return scale > 0.0 ? std::sqrt(r2) / scale : std::sqrt(r2);
}

void sort_spectrum(SpectrumResult& r, Which which) {
  std::vector<std::size_t> idx(r.eigenvalues.size());
  std::iota(idx.begin(), idx.end(), 0);
  const double sigma = r.shift;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    const Complex a = r.eigenvalues[i];
    const Complex b = r.eigenvalues[j];
    switch (which) {
      case Which::nearest_shift: {
        const double da = std::abs(a - sigma);
        const double db = std::abs(b - sigma);
        if (da != db) return da < db;
        break;
      }
      case Which::smallest_real:
        if (a.real() != b.real()) return a.real() < b.real();
        break;
      case Which::largest_real:
        if (a.real() != b.real()) return a.real() > b.real();
        break;
    }
    return a.imag() < b.imag();
  });
  SpectrumResult out = r;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out.eigenvalues[k] = r.eigenvalues[idx[k]];
    out.eigenvectors[k] = std::move(r.eigenvectors[idx[k]]);
    out.residuals[k] = r.residuals[idx[k]];
    out.converged[k] = r.converged[idx[k]];
  }
  r = std::move(out);
}

SpectrumResult eigs(const SparseMatrix& a, const SparseMatrix& b, const ShiftInvertOperator& op,
                    const EigsOptions& options) {
  const RitzResult ritz = krylov_schur([&](std::span<const double> x, std::span<double> y) { op.apply(x, y); },
                                       op.size(), options);
  SpectrumResult r;
  r.shift = op.shift();
  r.tol = options.tol;
  r.operator_applications = ritz.operator_applications;
  r.restarts = ritz.restarts;
  r.all_converged = true;
  for (std::size_t i = 0; i < ritz.values.size(); ++i) {
    const Complex theta = ritz.values[i];
    if (theta == Complex(0.0, 0.0)) {
      r.eigenvalues.emplace_back(std::numeric_limits<double>::infinity(), 0.0);
      r.eigenvectors.push_back(ritz.vectors[i]);
      r.residuals.push_back(std::numeric_limits<double>::infinity());
      r.converged.push_back(false);
      r.all_converged = false;
      continue;
    }
    Complex lambda = r.shift + 1.0 / theta;
    if (theta.imag() == 0.0) lambda = Complex(lambda.real(), 0.0);
    const double res = backward_error(a, b, lambda, ritz.vectors[i]);
    r.eigenvalues.push_back(lambda);
    r.eigenvectors.push_back(ritz.vectors[i]);
    r.residuals.push_back(res);
    const bool ok = res <= options.tol && ritz.converged;
    r.converged.push_back(ok);
    r.all_converged = r.all_converged && ok;
  }
  sort_spectrum(r, options.which);
  return r;
}

SpectrumResult eigs(const SparseMatrix& a, const SparseMatrix& b, const EigsOptions& options) {
  const ShiftInvertOperator op(a, b, options.sigma);
  return eigs(a, b, op, options);
}

}  // namespace sp3hex::linalg
