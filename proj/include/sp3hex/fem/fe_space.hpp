#pragma once

#include "sp3hex/fem/lagrange.hpp"
#include "sp3hex/fem/sparse.hpp"
#include "sp3hex/geometry/mesh.hpp"

#include <memory>
#include <vector>

namespace sp3hex::fem {

/// Scalar C0 Lagrange space of degree p on a triangulation.
///
/// Global numbering: vertices, then edges sorted by vertex pair (p-1 dofs each,
/// ordered from the lower vertex index), then cell interiors. The space also
/// owns the sparsity pattern shared by every matrix assembled on it, so
/// matrices built on the same space can be combined value-wise.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const geometry::Mesh> mesh, int degree);

  [[nodiscard]] const geometry::Mesh& mesh() const noexcept { return *mesh_; }
  [[nodiscard]] const std::shared_ptr<const geometry::Mesh>& mesh_ptr() const noexcept { return mesh_; }
  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] const LagrangeTriangle& element() const noexcept { return *element_; }

  [[nodiscard]] int dof_count() const noexcept { return ndofs_; }
  [[nodiscard]] int vertex_count() const noexcept { return nvertices_; }
  [[nodiscard]] int edge_count() const noexcept { return nedges_; }
  [[nodiscard]] int local_dofs() const noexcept { return nloc_; }

  /// Global dofs of cell t in local element order.
  [[nodiscard]] std::span<const int> cell_dofs(std::size_t t) const {
    return {cell_dofs_.data() + t * static_cast<std::size_t>(nloc_), static_cast<std::size_t>(nloc_)};
  }

  /// Global dofs of boundary edge b: first vertex, interior nodes, second vertex.
  [[nodiscard]] std::span<const int> boundary_edge_dofs(std::size_t b) const {
    const auto n = static_cast<std::size_t>(degree_ + 1);
    return {boundary_dofs_.data() + b * n, n};
  }

  /// Sorted unique dofs lying on the boundary.
  [[nodiscard]] const std::vector<int>& boundary_dof_list() const noexcept { return boundary_dof_list_; }

  /// Physical coordinates of each dof's Lagrange node.
  [[nodiscard]] const std::vector<geometry::Point2>& dof_points() const noexcept { return dof_points_; }

  /// Shared pattern (values zero).
  [[nodiscard]] const SparseMatrix& pattern() const noexcept { return pattern_; }

  /// Value-array positions for cell t, local (i, j) at [i * nloc + j].
  [[nodiscard]] std::span<const int> cell_positions(std::size_t t) const {
    const auto n = static_cast<std::size_t>(nloc_) * static_cast<std::size_t>(nloc_);
    return {cell_positions_.data() + t * n, n};
  }
  [[nodiscard]] std::span<const int> edge_positions(std::size_t b) const {
    const auto n = static_cast<std::size_t>(degree_ + 1) * static_cast<std::size_t>(degree_ + 1);
    return {edge_positions_.data() + b * n, n};
  }

  /// For each row, (cell, local index) contributions in ascending cell order.
  struct Contribution {
    int item;
    int local;
  };
  [[nodiscard]] std::span<const Contribution> row_cells(int row) const {
    const auto b = static_cast<std::size_t>(row_cell_ptr_[static_cast<std::size_t>(row)]);
    const auto e = static_cast<std::size_t>(row_cell_ptr_[static_cast<std::size_t>(row) + 1]);
    return {row_cell_items_.data() + b, e - b};
  }
  [[nodiscard]] std::span<const Contribution> row_edges(int row) const {
    const auto b = static_cast<std::size_t>(row_edge_ptr_[static_cast<std::size_t>(row)]);
    const auto e = static_cast<std::size_t>(row_edge_ptr_[static_cast<std::size_t>(row) + 1]);
    return {row_edge_items_.data() + b, e - b};
  }

  /// Affine map data for cell t: vertices p0 and Jacobian columns (p1-p0, p2-p0).
  struct CellGeometry {
    double x0, y0;
    double j00, j01, j10, j11;
    double det;
  };
  [[nodiscard]] CellGeometry cell_geometry(std::size_t t) const;

  /// Index of the cell containing (x, y), or -1 when outside the mesh.
  [[nodiscard]] int locate(double x, double y, double tolerance = 1e-12) const;

 private:
  std::shared_ptr<const geometry::Mesh> mesh_;
  int degree_;
  const LagrangeTriangle* element_;
  int nloc_ = 0;
  int ndofs_ = 0;
  int nvertices_ = 0;
  int nedges_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<int> boundary_dofs_;
  std::vector<int> boundary_dof_list_;
  std::vector<geometry::Point2> dof_points_;
  SparseMatrix pattern_;
  std::vector<int> cell_positions_;
  std::vector<int> edge_positions_;
  std::vector<int> row_cell_ptr_;
  std::vector<Contribution> row_cell_items_;
  std::vector<int> row_edge_ptr_;
  std::vector<Contribution> row_edge_items_;
};

}  // namespace sp3hex::fem
