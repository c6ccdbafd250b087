#pragma once

#include "sp3hex/fem/sparse.hpp"
#include "sp3hex/linalg/sparse_lu.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sp3hex::linalg {

using Complex = std::complex<double>;

/// Ordering of the returned eigenvalues. The computed set is always the one
/// nearest the shift; this only controls the order of the output.
enum class Which { nearest_shift, smallest_real, largest_real };

[[nodiscard]] Which parse_which(std::string_view text);

struct EigsOptions {
  int nev = 1;
  double sigma = 0.0;
  Which which = Which::nearest_shift;
  double tol = 1e-12;
  int max_restarts = 500;
  /// Krylov subspace size; 0 selects max(2 nev + 8, 20).
  int subspace = 0;
  /// Starting vector; empty selects the normalized all-ones vector.
  std::vector<double> seed;
  /// After convergence, restart once from a fresh vector orthogonal to the
  /// converged Schur vectors to pick up missed copies of repeated eigenvalues.
  bool verify_multiplicity = true;
};

struct SpectrumResult {
  std::vector<Complex> eigenvalues;
  std::vector<std::vector<Complex>> eigenvectors;
  /// Backward error ||A x - lambda B x|| / ((||A|| + |lambda| ||B||) ||x||), recomputed from scratch.
  std::vector<double> residuals;
  std::vector<bool> converged;
  int operator_applications = 0;
  int restarts = 0;
  double shift = 0.0;
  double tol = 0.0;
  bool all_converged = false;
};

/// y = Op x for a real operator of dimension n.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Ritz pairs of a standard problem Op x = theta x with largest |theta|.
struct RitzResult {
  std::vector<Complex> values;
  std::vector<std::vector<Complex>> vectors;
  std::vector<double> estimates;
  int operator_applications = 0;
  int restarts = 0;
  bool converged = false;
};

/// Krylov-Schur iteration in real arithmetic for the nev eigenvalues of
/// largest modulus. Conjugate pairs are never split, so up to nev + 1 values
/// may be returned.
[[nodiscard]] RitzResult krylov_schur(const LinearOperator& op, int n, const EigsOptions& options);

/// (A - sigma B)^-1 B, factorized once.
class ShiftInvertOperator {
 public:
  ShiftInvertOperator(const SparseMatrix& a, const SparseMatrix& b, double sigma);
  void apply(std::span<const double> x, std::span<double> y) const;
  [[nodiscard]] int size() const noexcept { return lu_.size(); }
  [[nodiscard]] double shift() const noexcept { return sigma_; }

 private:
  const SparseMatrix* b_;
  double sigma_;
  SparseLu lu_;
  mutable std::vector<double> work_;
};

/// Generalized problem A x = lambda B x by shift-invert Krylov-Schur about sigma.
[[nodiscard]] SpectrumResult eigs(const SparseMatrix& a, const SparseMatrix& b, const EigsOptions& options);

/// Same as eigs with an operator that is already factorized.
[[nodiscard]] SpectrumResult eigs(const SparseMatrix& a, const SparseMatrix& b, const ShiftInvertOperator& op,
                                  const EigsOptions& options);

/// Backward error of one pair, as stored in SpectrumResult::residuals.
[[nodiscard]] double backward_error(const SparseMatrix& a, const SparseMatrix& b, Complex lambda,
                                    std::span<const Complex> x);

/// Orders a spectrum in place (values, vectors, residuals and flags together).
void sort_spectrum(SpectrumResult& result, Which which);

}  // namespace sp3hex::linalg
