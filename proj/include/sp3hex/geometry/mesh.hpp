#pragma once

#include "sp3hex/geometry/core_layout.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sp3hex::geometry {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Triangle {
  std::array<int, 3> v{};
  int material = 0;
  int assembly = 0;
};

struct BoundaryEdge {
  std::array<int, 2> v{};
  int marker = 1;
};

struct AssemblyInfo {
  int q = 0;
  int r = 0;
  int material = 0;
};

/// Conforming triangulation with material and assembly tags.
///
/// Vertices carry exact integer coordinates on the triangular lattice spanned by
/// u = (R, 0) and v = (R/2, R sqrt(3)/2), divided by `lattice_scale`.
struct Mesh {
  std::vector<Point2> vertices;
  std::vector<std::array<std::int64_t, 2>> lattice;
  std::int64_t lattice_scale = 1;
  double lattice_unit = 1.0;

  std::vector<Triangle> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<AssemblyInfo> assemblies;
  int triangles_per_assembly = 0;

  [[nodiscard]] double triangle_area(std::size_t t) const;
  [[nodiscard]] double signed_area(std::size_t t) const;
  [[nodiscard]] double total_area() const;
  [[nodiscard]] double boundary_length() const;

  /// Sorted unique edges as vertex pairs (first < second).
  [[nodiscard]] std::vector<std::array<int, 2>> edges() const;

  /// Throws unless triangles are positive and the mesh is conforming.
  void check_conforming() const;
};

/// Fans every hexagon into 6 triangles and refines uniformly to reach
/// `triangles_per_assembly` in {6, 24, 96}.
[[nodiscard]] Mesh build_core_mesh(const CoreLayout& layout, int triangles_per_assembly);

/// Splits each triangle into four through its edge midpoints.
[[nodiscard]] Mesh refine_uniform(const Mesh& mesh);

/// Recomputes boundary edges from triangle incidence (edges used once).
void mark_boundary(Mesh& mesh, int marker = 1);

/// Cell-data attached to a VTK export, one value per triangle.
struct CellField {
  std::string name;
  std::vector<double> values;
};

/// Point-data attached to a VTK export, one value per mesh vertex.
struct PointField {
  std::string name;
  std::vector<double> values;
};

/// Legacy ASCII VTK unstructured grid; floats written with 17 significant digits.
void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const PointField> point_fields = {},
               std::span<const CellField> cell_fields = {});
void write_vtk(const std::string& path, const Mesh& mesh,
               std::span<const PointField> point_fields = {},
               std::span<const CellField> cell_fields = {});

}  // namespace sp3hex::geometry
