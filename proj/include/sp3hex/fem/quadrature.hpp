#pragma once

#include <array>
#include <vector>

namespace sp3hex::fem {

/// Quadrature on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct TriangleRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Quadrature on [0, 1]; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Symmetric Gauss rule exact for polynomials of total degree `degree` (<= 6).
[[nodiscard]] const TriangleRule& symmetric_triangle_rule(int degree);

/// Gauss-Legendre rule with n points, exact to degree 2n-1.
[[nodiscard]] LineRule gauss_legendre(int n);

/// Collapsed (Duffy) tensor Gauss rule, exact to total degree 2n-2. Used for
/// non-polynomial integrands such as manufactured sources and error norms.
[[nodiscard]] TriangleRule collapsed_triangle_rule(int n);

}  // namespace sp3hex::fem
