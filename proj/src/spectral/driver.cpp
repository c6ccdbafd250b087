#include "sp3hex/spectral/driver.hpp"

#include "sp3hex/error.hpp"
#include "sp3hex/fem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sp3hex::spectral {

using neutronics::BlockOperators;

namespace {

constexpr double kDelayedLowShift = -2.0;

bool has_fission(const BlockOperators& ops) { return norm_inf(ops.M) > 0.0; }

linalg::EigsOptions options_for(const ProblemSpec& spec, int nev, double sigma) {
  if (spec.nev < 1) throw Error(ErrorCode::invalid_argument, "nev must be at least 1");
  linalg::EigsOptions o;
  o.nev = nev;
  o.sigma = sigma;
  o.which = linalg::Which::smallest_real;
  o.tol = spec.tol;
  o.max_restarts = spec.max_restarts;
  return o;
}

// Divides each vector by its scalar-flux entry of largest modulus.
void normalize(linalg::SpectrumResult& r, const neutronics::FieldLayout& layout) {
  const auto n = static_cast<std::size_t>(layout.flux_block());
  for (auto& v : r.eigenvectors) {
    Complex pivot{0.0, 0.0};
    for (int g = 0; g < layout.groups; ++g) {
      const auto o0 = static_cast<std::size_t>(layout.flux_offset(0, g));
      for (std::size_t i = 0; i < n; ++i) {
        Complex phi = v[o0 + i];
        if (layout.fields == 2) phi -= 2.0 * v[static_cast<std::size_t>(layout.flux_offset(1, g)) + i];
        if (std::abs(phi) > std::abs(pivot)) pivot = phi;
      }
    }
    if (pivot == Complex(0.0, 0.0)) continue;
    for (auto& x : v) x /= pivot;
  }
}

void keep_first(linalg::SpectrumResult& r, std::size_t count) {
  // Never split a conjugate pair at the cut.
  if (count < r.eigenvalues.size() && count > 0 && r.eigenvalues[count - 1].imag() < 0.0 &&
      r.eigenvalues[count] == std::conj(r.eigenvalues[count - 1])) {
    ++count;
  }
  if (count >= r.eigenvalues.size()) return;
  r.eigenvalues.resize(count);
  r.eigenvectors.resize(count);
  r.residuals.resize(count);
  r.converged.resize(count);
}

void refresh_flags(linalg::SpectrumResult& r) {
  r.all_converged = std::all_of(r.converged.begin(), r.converged.end(), [](bool b) { return b; });
}

}  // namespace

ProblemKind parse_problem(std::string_view text) {
  if (text == "lambda") return ProblemKind::lambda;
  if (text == "alpha" || text == "alpha-prompt") return ProblemKind::alpha_prompt;
  if (text == "alpha-delayed") return ProblemKind::alpha_delayed;
  throw Error(ErrorCode::invalid_argument, "unknown problem '" + std::string(text) + "'");
}

std::string_view to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::lambda: return "lambda";
    case ProblemKind::alpha_prompt: return "alpha";
    case ProblemKind::alpha_delayed: return "alpha-delayed";
  }
  return "lambda";
}

SpectralSolution solve_lambda(const BlockOperators& ops, const ProblemSpec& spec) {
  if (!has_fission(ops)) throw Error(ErrorCode::no_fission, "lambda problem: the core has no fissile material");
  const double sigma = spec.shift.value_or(0.0);
  SpectralSolution s;
  s.kind = ProblemKind::lambda;
  s.shifts = {sigma};
  s.spectrum = linalg::eigs(ops.L, ops.M, options_for(spec, spec.nev, sigma));
  keep_first(s.spectrum, static_cast<std::size_t>(spec.nev));
  refresh_flags(s.spectrum);
  normalize(s.spectrum, ops.layout);
  for (const Complex& l : s.spectrum.eigenvalues) s.k.push_back(1.0 / l);
  return s;
}

SpectralSolution solve_alpha_prompt(const BlockOperators& ops, const ProblemSpec& spec) {
  if (!has_fission(ops)) throw Error(ErrorCode::no_fission, "alpha problem: the core has no fissile material");
  const double sigma = spec.shift.value_or(0.0);
  const SparseMatrix a = add(ops.L, ops.M, 1.0, -1.0);
  SpectralSolution s;
  s.kind = ProblemKind::alpha_prompt;
  s.shifts = {sigma};
  s.spectrum = linalg::eigs(a, ops.W, options_for(spec, spec.nev, sigma));
  keep_first(s.spectrum, static_cast<std::size_t>(spec.nev));
  refresh_flags(s.spectrum);
  normalize(s.spectrum, ops.layout);
  return s;
}

AugmentedPencil delayed_pencil(const BlockOperators& ops) {
  if (ops.layout.precursor_groups < 1) {
    throw Error(ErrorCode::invalid_argument, "delayed alpha problem needs at least one precursor group");
  }
  const double beta = ops.kinetics.total_beta();
  const SparseMatrix top_left = add(ops.L, ops.M, 1.0, -(1.0 - beta));
  AugmentedPencil p;
  p.a = block_matrix({{{&top_left, 1.0}, {&ops.I_blk, -1.0}}, {{&ops.R, -1.0}, {&ops.Lambda, 1.0}}});
  p.b = block_matrix({{{&ops.W, 1.0}, {nullptr, 0.0}}, {{nullptr, 0.0}, {&ops.S, 1.0}}});
  return p;
}

SpectralSolution solve_alpha_delayed(const BlockOperators& ops, const ProblemSpec& spec) {
  if (!has_fission(ops)) throw Error(ErrorCode::no_fission, "alpha problem: the core has no fissile material");
  const AugmentedPencil pencil = delayed_pencil(ops);
  SpectralSolution s;
  s.kind = ProblemKind::alpha_delayed;
  if (spec.shift) {
    s.shifts = {*spec.shift};
    s.spectrum = linalg::eigs(pencil.a, pencil.b, options_for(spec, spec.nev, *spec.shift));
  } else {
    s.shifts = {kDelayedLowShift, 0.0};
    linalg::SpectrumResult low = linalg::eigs(pencil.a, pencil.b, options_for(spec, 1, kDelayedLowShift));
    linalg::SpectrumResult high = linalg::eigs(pencil.a, pencil.b, options_for(spec, spec.nev, 0.0));
    linalg::SpectrumResult& u = high;
    for (std::size_t i = 0; i < low.eigenvalues.size(); ++i) {
      const Complex l = low.eigenvalues[i];
      const bool duplicate = std::any_of(u.eigenvalues.begin(), u.eigenvalues.end(), [&](const Complex& h) {
        return std::abs(h - l) <= 1e-8 * std::max(std::abs(l), 1e-12);
      });
      if (duplicate) continue;
      u.eigenvalues.push_back(l);
      u.eigenvectors.push_back(std::move(low.eigenvectors[i]));
      u.residuals.push_back(low.residuals[i]);
      u.converged.push_back(low.converged[i]);
    }
    u.operator_applications += low.operator_applications;
    u.restarts += low.restarts;
    linalg::sort_spectrum(u, linalg::Which::smallest_real);
    s.spectrum = std::move(u);
  }
  keep_first(s.spectrum, static_cast<std::size_t>(spec.nev));
  refresh_flags(s.spectrum);
  normalize(s.spectrum, ops.layout);
  return s;
}

SpectralSolution solve(const BlockOperators& ops, const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::lambda: return solve_lambda(ops, spec);
    case ProblemKind::alpha_prompt: return solve_alpha_prompt(ops, spec);
    case ProblemKind::alpha_delayed: return solve_alpha_delayed(ops, spec);
  }
  throw Error(ErrorCode::invalid_argument, "unknown problem kind");
}

PowerDistribution compute_power(std::span<const Complex> eigenvector, const BlockOperators& ops) {
  const auto& layout = ops.layout;
  if (eigenvector.size() < static_cast<std::size_t>(layout.flux_size())) {
    throw Error(ErrorCode::invalid_argument, "power: eigenvector shorter than the flux unknowns");
  }
  const fem::FeSpace& space = *ops.space;
  const auto& assemblies = space.mesh().assemblies;
  PowerDistribution p;
  p.power.assign(assemblies.size(), 0.0);
  p.fuel.assign(assemblies.size(), false);
  for (std::size_t a = 0; a < assemblies.size(); ++a) p.fuel[a] = ops.materials.at(assemblies[a].material).fissile();

  std::vector<double> re(static_cast<std::size_t>(layout.flux_size()));
  for (std::size_t i = 0; i < re.size(); ++i) re[i] = eigenvector[i].real();
  for (int g = 0; g < layout.groups; ++g) {
    const std::vector<double> phi = layout.scalar_flux(re, g);
    fem::MaterialCoefficients coeff;
    for (const auto& [id, m] : ops.materials) coeff[id] = m.nu_sigma_f[static_cast<std::size_t>(g)];
    const std::vector<double> part = fem::integrate_per_assembly(space, phi, coeff);
    for (std::size_t a = 0; a < p.power.size(); ++a) p.power[a] += part[a];
  }
  double sum = 0.0;
  int count = 0;
  for (std::size_t a = 0; a < p.power.size(); ++a) {
    if (!p.fuel[a]) {
      p.power[a] = 0.0;
      continue;
    }
    sum += p.power[a];
    ++count;
  }
  if (count == 0 || sum == 0.0) throw Error(ErrorCode::no_fission, "power: the core has no fuel assemblies");
  p.normalization = sum / count;
  for (double& x : p.power) x /= p.normalization;
  return p;
}

double power_deviation(const PowerDistribution& p, const PowerDistribution& reference) {
  if (p.power.size() != reference.power.size()) {
    throw Error(ErrorCode::invalid_argument, "power deviation: distributions differ in size");
  }
  double s = 0.0;
  int count = 0;
  for (std::size_t a = 0; a < p.power.size(); ++a) {
    if (!reference.fuel[a]) continue;
    const double d = (p.power[a] - reference.power[a]) / reference.power[a];
    s += d * d;
    ++count;
  }
  return count > 0 ? 100.0 * std::sqrt(s / count) : 0.0;
}

double inhour_lambda_pr(double k, double alpha_prompt) {
  if (!(k > 0.0)) throw Error(ErrorCode::invalid_argument, "inhour: k must be positive");
  if (alpha_prompt == 0.0 || k == 1.0) {
    throw Error(ErrorCode::critical_limit, "inhour: the reactor is critical, generation time is undefined");
  }
  return (1.0 - k) / (k * alpha_prompt);
}

double inhour_alpha_from_alpha_tot(double alpha_tot, const neutronics::KineticsData& kinetics, double lambda_pr) {
  if (lambda_pr == 0.0) throw Error(ErrorCode::invalid_argument, "inhour: generation time must be nonzero");
  double sum = 0.0;
  for (std::size_t m = 0; m < kinetics.beta.size(); ++m) {
    const double d = kinetics.decay[m] - alpha_tot;
    if (std::abs(d) <= 1e-14 * std::max(1.0, std::abs(kinetics.decay[m]))) {
      throw Error(ErrorCode::inhour_pole, "inhour: alpha_tot coincides with a decay constant");
    }
    sum += kinetics.beta[m] / d;
  }
  return alpha_tot / lambda_pr * sum + alpha_tot;
}

}  // namespace sp3hex::spectral
