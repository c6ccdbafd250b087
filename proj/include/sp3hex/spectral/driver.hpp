#pragma once

#include "sp3hex/linalg/eigs.hpp"
#include "sp3hex/neutronics/operators.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace sp3hex::spectral {

using linalg::Complex;

enum class ProblemKind { lambda, alpha_prompt, alpha_delayed };

/// Accepts "lambda", "alpha" (or "alpha-prompt") and "alpha-delayed".
[[nodiscard]] ProblemKind parse_problem(std::string_view text);
[[nodiscard]] std::string_view to_string(ProblemKind kind) noexcept;

struct ProblemSpec {
  ProblemKind kind = ProblemKind::lambda;
  int nev = 1;
  /// Overrides the default shift strategy with a single shift.
  std::optional<double> shift;
  double tol = 1e-12;
  int max_restarts = 500;
};

struct SpectralSolution {
  ProblemKind kind = ProblemKind::lambda;
  /// Eigenvalues of the posed pencil in ascending real part, conjugates with
  /// negative imaginary part first. Vectors are scaled so that the scalar flux
  /// entry of largest modulus equals 1.
  linalg::SpectrumResult spectrum;
  /// k_i = 1 / lambda_i for the lambda problem, empty otherwise.
  std::vector<Complex> k;
  /// Shifts used, in the order they were run.
  std::vector<double> shifts;

  /// k for the lambda problem, alpha otherwise.
  [[nodiscard]] std::vector<Complex> reported() const { return kind == ProblemKind::lambda ? k : spectrum.eigenvalues; }
};

/// L phi = lambda M phi about sigma = 0 (largest k first). Throws no-fission.
[[nodiscard]] SpectralSolution solve_lambda(const neutronics::BlockOperators& ops, const ProblemSpec& spec);

/// (L - M) phi = alpha W phi about sigma = 0.
[[nodiscard]] SpectralSolution solve_alpha_prompt(const neutronics::BlockOperators& ops, const ProblemSpec& spec);

/// [[L - (1 - beta) M, -I], [-R, Lambda]] (phi, s) = alpha [[W, 0], [0, S]] (phi, s).
///
/// Without a shift override two shifts are used: sigma = -2 for the single
/// eigenvalue below the precursor cluster and sigma = 0 for the cluster; the
/// union is deduplicated and the nev smallest real parts are kept.
[[nodiscard]] SpectralSolution solve_alpha_delayed(const neutronics::BlockOperators& ops, const ProblemSpec& spec);

[[nodiscard]] SpectralSolution solve(const neutronics::BlockOperators& ops, const ProblemSpec& spec);

/// The augmented pencil of the delayed problem, (A, B).
struct AugmentedPencil {
  SparseMatrix a;
  SparseMatrix b;
};
[[nodiscard]] AugmentedPencil delayed_pencil(const neutronics::BlockOperators& ops);

struct PowerDistribution {
  /// Per assembly, indexed like Mesh::assemblies; zero outside fuel.
  std::vector<double> power;
  std::vector<bool> fuel;
  /// Raw fuel-mean power that was divided out.
  double normalization = 0.0;
};

/// Assembly powers of an eigenvector, fuel mean 1. The real part is used.
[[nodiscard]] PowerDistribution compute_power(std::span<const Complex> eigenvector,
                                              const neutronics::BlockOperators& ops);

/// Root mean square of relative deviations over fuel assemblies, in percent.
[[nodiscard]] double power_deviation(const PowerDistribution& p, const PowerDistribution& reference);

/// (1 - k) / (k alpha). Throws critical-limit at k = 1 or alpha = 0.
[[nodiscard]] double inhour_lambda_pr(double k, double alpha_prompt);

/// alpha_tot / Lambda_pr * sum_m beta_m / (lambda_m - alpha_tot) + alpha_tot. Throws inhour-pole.
[[nodiscard]] double inhour_alpha_from_alpha_tot(double alpha_tot, const neutronics::KineticsData& kinetics,
                                                 double lambda_pr);

}  // namespace sp3hex::spectral
