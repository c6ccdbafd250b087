#pragma once

#include "sp3hex/fem/fe_space.hpp"
#include "sp3hex/fem/sparse.hpp"

#include <functional>
#include <map>
#include <span>
#include <vector>

namespace sp3hex::fem {

/// Piecewise-constant coefficient keyed by material id.
using MaterialCoefficients = std::map<int, double>;

using ScalarFunction = std::function<double(double, double)>;

/// sum_K c(K) int_K grad(phi_i) . grad(phi_j) on the space pattern.
[[nodiscard]] SparseMatrix assemble_stiffness(const FeSpace& space, const MaterialCoefficients& coeff,
                                              Execution exec = Execution::parallel);

/// sum_K c(K) int_K phi_i phi_j on the space pattern.
[[nodiscard]] SparseMatrix assemble_mass(const FeSpace& space, const MaterialCoefficients& coeff,
                                         Execution exec = Execution::parallel);

/// c * sum_e int_e phi_i phi_j ds over marked boundary edges, on the space pattern.
[[nodiscard]] SparseMatrix assemble_boundary_mass(const FeSpace& space, double coeff,
                                                  Execution exec = Execution::parallel);

/// int f phi_i, integrated with a collapsed rule of `order` points per direction.
[[nodiscard]] std::vector<double> assemble_load(const FeSpace& space, const ScalarFunction& f, int order = 8);

/// int_{boundary} g phi_i ds with a Gauss-Legendre rule of `order` points.
[[nodiscard]] std::vector<double> assemble_boundary_load(const FeSpace& space, const ScalarFunction& g,
                                                         int order = 8);

/// Nodal interpolant of f.
[[nodiscard]] std::vector<double> interpolate(const FeSpace& space, const ScalarFunction& f);

/// Value of the discrete field at (x, y). Throws point-outside-mesh.
[[nodiscard]] double evaluate_field(const FeSpace& space, std::span<const double> u, double x, double y);

/// || u_h - u ||_{L2} with a collapsed rule of `order` points per direction.
[[nodiscard]] double l2_error(const FeSpace& space, std::span<const double> u, const ScalarFunction& exact,
                              int order = 8);

/// | u_h - u |_{H1}; the exact gradient returns (du/dx, du/dy).
[[nodiscard]] double h1_seminorm_error(const FeSpace& space, std::span<const double> u,
                                       const std::function<std::array<double, 2>(double, double)>& grad,
                                       int order = 8);

/// int_a c u dA for every assembly a, exact for piecewise-constant c.
[[nodiscard]] std::vector<double> integrate_per_assembly(const FeSpace& space, std::span<const double> u,
                                                         const MaterialCoefficients& coeff);

}  // namespace sp3hex::fem
