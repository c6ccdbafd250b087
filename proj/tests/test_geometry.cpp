#include "sp3hex/error.hpp"
#include "sp3hex/geometry/core_layout.hpp"
#include "sp3hex/geometry/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace sp3hex;
using namespace sp3hex::geometry;

namespace {

CoreLayout single_cell(double pitch = 20.0) { return CoreLayout{pitch, {{0, 0, 1}}, BoundaryKind::marshak}; }

// Hexagonal patch of the given lattice radius.
CoreLayout patch(int radius, double pitch = 20.0) {
  CoreLayout layout{pitch, {}, BoundaryKind::marshak};
  for (int q = -radius; q <= radius; ++q) {
    for (int r = std::max(-radius, -q - radius); r <= std::min(radius, -q + radius); ++r) {
      layout.cells.push_back({q, r, 1 + (q + r + 100) % 2});
    }
  }
  return layout;
}

int euler_characteristic(const Mesh& m) {
  return static_cast<int>(m.vertices.size()) - static_cast<int>(m.edges().size()) +
         static_cast<int>(m.triangles.size());
}

}  // namespace

TEST(CoreMesh, SingleCellFan) {
  const Mesh m = build_core_mesh(single_cell(), 6);
  EXPECT_EQ(m.triangles.size(), 6u);
  EXPECT_EQ(m.vertices.size(), 7u);
  EXPECT_EQ(m.boundary_edges.size(), 6u);
  EXPECT_NO_THROW(m.check_conforming());
}

TEST(CoreMesh, RefinementLadder) {
  for (int n : {6, 24, 96}) {
    const Mesh m = build_core_mesh(single_cell(), n);
    EXPECT_EQ(m.triangles.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(euler_characteristic(m), 1);
    EXPECT_NO_THROW(m.check_conforming());
  }
}

TEST(CoreMesh, InvalidRefinement) {
  try {
    (void)build_core_mesh(single_cell(), 12);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_refinement);
  }
}

TEST(CoreMesh, AreaAndCountsOnPatch) {
  const CoreLayout layout = patch(3);
  ASSERT_EQ(layout.assembly_count(), 37u);
  for (int n : {6, 24, 96}) {
    const Mesh m = build_core_mesh(layout, n);
    EXPECT_EQ(m.triangles.size(), static_cast<std::size_t>(n) * layout.assembly_count());
    const double expected = static_cast<double>(layout.assembly_count()) * layout.hexagon_area();
    EXPECT_NEAR(m.total_area(), expected, 1e-10 * expected);
    EXPECT_EQ(euler_characteristic(m), 1);
    EXPECT_NO_THROW(m.check_conforming());
    for (std::size_t t = 0; t < m.triangles.size(); ++t) EXPECT_GT(m.signed_area(t), 0.0);
  }
}

TEST(CoreMesh, SharedEdgesAreConforming) {
  CoreLayout two{20.0, {{0, 0, 1}, {1, 0, 2}}, BoundaryKind::marshak};
  const Mesh m = build_core_mesh(two, 6);
  // Two fans share one edge: 7 + 7 - 2 vertices.
  EXPECT_EQ(m.vertices.size(), 12u);
  EXPECT_EQ(m.boundary_edges.size(), 10u);
  EXPECT_NO_THROW(m.check_conforming());
  std::set<int> materials;
  for (const auto& t : m.triangles) materials.insert(t.material);
  EXPECT_EQ(materials, (std::set<int>{1, 2}));
}

TEST(CoreMesh, BoundaryLengthIsPerimeter) {
  const Mesh m = build_core_mesh(single_cell(20.0), 96);
  const double side = 20.0 / std::sqrt(3.0);
  EXPECT_NEAR(m.boundary_length(), 6.0 * side, 1e-12 * 6.0 * side);
}

TEST(CoreMesh, Deterministic) {
  const Mesh a = build_core_mesh(patch(2), 24);
  const Mesh b = build_core_mesh(patch(2), 24);
  ASSERT_EQ(a.vertices.size(), b.vertices.size());
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    EXPECT_EQ(a.vertices[i].x, b.vertices[i].x);
    EXPECT_EQ(a.vertices[i].y, b.vertices[i].y);
  }
  for (std::size_t t = 0; t < a.triangles.size(); ++t) EXPECT_EQ(a.triangles[t].v, b.triangles[t].v);
}

TEST(CoreMesh, RefineUniformSplitsArea) {
  const Mesh coarse = build_core_mesh(patch(1), 6);
  const Mesh fine = refine_uniform(coarse);
  ASSERT_EQ(fine.triangles.size(), 4 * coarse.triangles.size());
  for (std::size_t t = 0; t < coarse.triangles.size(); ++t) {
    double children = 0.0;
    for (std::size_t c = 0; c < 4; ++c) children += fine.triangle_area(4 * t + c);
    EXPECT_NEAR(children, coarse.triangle_area(t), 1e-12 * coarse.triangle_area(t));
    EXPECT_EQ(fine.triangles[4 * t].assembly, coarse.triangles[t].assembly);
  }
}

TEST(CoreMesh, RefineWithoutLattice) {
  Mesh m;
  m.vertices = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{{0, 1, 2}, 1, 0}};
  mark_boundary(m);
  const Mesh f = refine_uniform(refine_uniform(m));
  EXPECT_EQ(f.triangles.size(), 16u);
  EXPECT_NEAR(f.total_area(), 0.5, 1e-15);
  EXPECT_NO_THROW(f.check_conforming());
}

TEST(CoreLayout, RowsRoundTrip) {
  const std::vector<std::vector<int>> rows = {{0, 1}, {1, 2, 1}, {1, 0}};
  const CoreLayout layout = CoreLayout::from_rows(17.78, rows, BoundaryKind::zero_flux);
  EXPECT_EQ(layout.cells.size(), 5u);
  EXPECT_EQ(layout.to_rows(), rows);
  EXPECT_NO_THROW(layout.validate({1, 2}));
}

TEST(CoreLayout, BadRowLengthIsParseError) {
  try {
    (void)CoreLayout::from_rows(20.0, {{1, 1, 1}, {1, 1, 1}, {1, 1}}, BoundaryKind::marshak);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
  }
}

TEST(CoreLayout, ValidationErrors) {
  CoreLayout layout = single_cell();
  try {
    layout.validate({2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_material);
  }
  layout.cells.push_back({3, 0, 1});
  try {
    layout.validate({1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::disconnected_layout);
  }
  CoreLayout bad{0.0, {{0, 0, 1}}, BoundaryKind::marshak};
  EXPECT_THROW(bad.validate({1}), Error);
}

TEST(CoreLayout, BoundaryKindNames) {
  for (auto k : {BoundaryKind::marshak, BoundaryKind::zero_flux, BoundaryKind::reflective}) {
    EXPECT_EQ(parse_boundary_kind(to_string(k)), k);
  }
  EXPECT_THROW((void)parse_boundary_kind("vacuum-ish"), Error);
}

TEST(Vtk, LegacyFormat) {
  const Mesh m = build_core_mesh(single_cell(), 6);
  std::ostringstream out;
  std::vector<PointField> pf{{"phi", std::vector<double>(m.vertices.size(), 0.1)}};
  write_vtk(out, m, pf);
  const std::string text = out.str();
  EXPECT_NE(text.find("DATASET UNSTRUCTURED_GRID"), std::string::npos);
  EXPECT_NE(text.find("CELL_TYPES 6"), std::string::npos);
  EXPECT_NE(text.find("SCALARS material_id int 1"), std::string::npos);
  EXPECT_NE(text.find("SCALARS assembly_id int 1"), std::string::npos);
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
}
