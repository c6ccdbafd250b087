#pragma once

#include <array>
#include <vector>

namespace sp3hex::fem {

/// Equispaced Lagrange element of degree 1..3 on the reference triangle.
///
/// Local numbering: the three vertices, then the p-1 nodes of each edge
/// e0 = (0,1), e1 = (1,2), e2 = (2,0) ordered from the edge's first vertex,
/// then interior nodes. Every node is identified by its barycentric multi-index.
class LagrangeTriangle {
 public:
  explicit LagrangeTriangle(int degree);

  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] int dofs() const noexcept { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] int dofs_per_edge() const noexcept { return degree_ - 1; }
  [[nodiscard]] int interior_dofs() const noexcept { return (degree_ - 1) * (degree_ - 2) / 2; }

  /// Barycentric multi-index (i0, i1, i2), i0 + i1 + i2 = p.
  [[nodiscard]] const std::vector<std::array<int, 3>>& nodes() const noexcept { return nodes_; }

  /// Reference coordinates of local node k.
  [[nodiscard]] std::array<double, 2> node_point(int k) const;

  [[nodiscard]] double value(int k, double x, double y) const;
  [[nodiscard]] std::array<double, 2> gradient(int k, double x, double y) const;

  /// Reference matrices (row-major, dofs x dofs), integrated exactly.
  [[nodiscard]] const std::vector<double>& mass() const noexcept { return mass_; }
  [[nodiscard]] const std::vector<double>& stiffness_xx() const noexcept { return sxx_; }
  [[nodiscard]] const std::vector<double>& stiffness_xy() const noexcept { return sxy_; }
  [[nodiscard]] const std::vector<double>& stiffness_yy() const noexcept { return syy_; }

  /// Integrals of the basis functions over the reference triangle.
  [[nodiscard]] const std::vector<double>& basis_integrals() const noexcept { return integrals_; }

  /// 1D mass matrix on [0,1] for the p+1 edge nodes ordered
  /// (first vertex, interior nodes, second vertex).
  [[nodiscard]] const std::vector<double>& edge_mass() const noexcept { return edge_mass_; }

  /// Local indices of the p+1 nodes along local edge e, from its first vertex.
  [[nodiscard]] std::vector<int> edge_nodes(int e) const;

 private:
  int degree_;
  std::vector<std::array<int, 3>> nodes_;
  std::vector<double> mass_;
  std::vector<double> sxx_;
  std::vector<double> sxy_;
  std::vector<double> syy_;
  std::vector<double> integrals_;
  std::vector<double> edge_mass_;
};

/// Shared immutable element for degree p.
[[nodiscard]] const LagrangeTriangle& lagrange_element(int degree);

/// 1D equispaced Lagrange basis of degree p on [0,1], node order
/// (0, interior..., 1) matching LagrangeTriangle::edge_nodes.
[[nodiscard]] double lagrange_1d(int degree, int k, double t);

}  // namespace sp3hex::fem
