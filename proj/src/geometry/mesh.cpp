#include "sp3hex/geometry/mesh.hpp"

#include "sp3hex/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>

namespace sp3hex::geometry {
namespace {

// Flat-top hexagon corners in lattice units (angles 0, 60, ..., 300 degrees).
constexpr std::int64_t kCorners[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};

Point2 lattice_to_point(std::int64_t a, std::int64_t b, std::int64_t scale, double unit) {
  const double s = unit / static_cast<double>(scale);
  return {s * (static_cast<double>(a) + 0.5 * static_cast<double>(b)),
          s * (std::sqrt(3.0) / 2.0) * static_cast<double>(b)};
}

std::array<int, 2> sorted_pair(int a, int b) { return a < b ? std::array{a, b} : std::array{b, a}; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double Mesh::signed_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const auto& p0 = vertices[static_cast<std::size_t>(tri.v[0])];
  const auto& p1 = vertices[static_cast<std::size_t>(tri.v[1])];
  const auto& p2 = vertices[static_cast<std::size_t>(tri.v[2])];
  return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

double Mesh::triangle_area(std::size_t t) const { return std::abs(signed_area(t)); }

double Mesh::total_area() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) sum += triangle_area(t);
  return sum;
}

double Mesh::boundary_length() const {
  double sum = 0.0;
  for (const auto& e : boundary_edges) {
    const auto& a = vertices[static_cast<std::size_t>(e.v[0])];
    const auto& b = vertices[static_cast<std::size_t>(e.v[1])];
    sum += std::hypot(b.x - a.x, b.y - a.y);
  }
  return sum;
}

std::vector<std::array<int, 2>> Mesh::edges() const {
  std::set<std::array<int, 2>> unique;
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) unique.insert(sorted_pair(tri.v[k], tri.v[(k + 1) % 3]));
  }
  return {unique.begin(), unique.end()};
}

void Mesh::check_conforming() const {
  std::map<std::array<int, 2>, int> count;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    if (!(signed_area(t) > 0.0)) {
      throw Error(ErrorCode::invalid_argument,
                  "triangle " + std::to_string(t) + " is degenerate or negatively oriented");
    }
    const auto& tri = triangles[t];
    for (int k = 0; k < 3; ++k) ++count[sorted_pair(tri.v[k], tri.v[(k + 1) % 3])];
  }
  std::set<std::array<int, 2>> boundary;
  for (const auto& [edge, n] : count) {
    if (n > 2) throw Error(ErrorCode::invalid_argument, "edge shared by more than two triangles");
    if (n == 1) boundary.insert(edge);
  }
  std::set<std::array<int, 2>> marked;
  for (const auto& e : boundary_edges) marked.insert(sorted_pair(e.v[0], e.v[1]));
  if (marked != boundary) {
    throw Error(ErrorCode::invalid_argument, "boundary edge list does not match mesh boundary");
  }
}

void mark_boundary(Mesh& mesh, int marker) {
  // Keep the orientation of the owning triangle so that the domain lies to the left.
  std::map<std::array<int, 2>, std::pair<int, std::array<int, 2>>> count;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const std::array<int, 2> oriented{tri.v[k], tri.v[(k + 1) % 3]};
      auto& entry = count[sorted_pair(oriented[0], oriented[1])];
      ++entry.first;
      entry.second = oriented;
    }
  }
  mesh.boundary_edges.clear();
  for (const auto& [key, entry] : count) {
    if (entry.first == 1) mesh.boundary_edges.push_back({entry.second, marker});
  }
}

Mesh build_core_mesh(const CoreLayout& layout, int triangles_per_assembly) {
  int refinements = 0;
  switch (triangles_per_assembly) {
    case 6: refinements = 0; break;
    case 24: refinements = 1; break;
    case 96: refinements = 2; break;
    default:
      throw Error(ErrorCode::invalid_refinement,
                  "triangles per assembly must be 6, 24 or 96, got " +
                      std::to_string(triangles_per_assembly));
  }
  if (!(layout.pitch_cm > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "assembly pitch must be positive");
  }

  Mesh mesh;
  mesh.lattice_scale = 1;
  mesh.lattice_unit = layout.pitch_cm / std::sqrt(3.0);
  mesh.triangles_per_assembly = 6;

  std::map<std::array<std::int64_t, 2>, int> index;
  auto vertex = [&](std::int64_t a, std::int64_t b) {
    const auto [it, inserted] = index.try_emplace({a, b}, static_cast<int>(mesh.vertices.size()));
    if (inserted) {
      mesh.lattice.push_back({a, b});
      mesh.vertices.push_back(lattice_to_point(a, b, 1, mesh.lattice_unit));
    }
    return it->second;
  };

  for (std::size_t cell = 0; cell < layout.cells.size(); ++cell) {
    const auto& c = layout.cells[cell];
    const std::int64_t ca = c.q - c.r;
    const std::int64_t cb = c.q + 2 * c.r;
    const int center = vertex(ca, cb);
    std::array<int, 6> corner{};
    for (int k = 0; k < 6; ++k) corner[static_cast<std::size_t>(k)] = vertex(ca + kCorners[k][0], cb + kCorners[k][1]);
    for (int k = 0; k < 6; ++k) {
      mesh.triangles.push_back({{center, corner[static_cast<std::size_t>(k)], corner[static_cast<std::size_t>((k + 1) % 6)]},
                                c.material,
                                static_cast<int>(cell)});
    }
    mesh.assemblies.push_back({c.q, c.r, c.material});
  }
  mark_boundary(mesh);

  for (int i = 0; i < refinements; ++i) mesh = refine_uniform(mesh);
  return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh fine;
  fine.vertices = mesh.vertices;
  fine.lattice_unit = mesh.lattice_unit;
  fine.assemblies = mesh.assemblies;
  fine.triangles_per_assembly = mesh.triangles_per_assembly * 4;
  const bool exact = mesh.lattice.size() == mesh.vertices.size() && !mesh.lattice.empty();
  if (exact) {
    fine.lattice_scale = mesh.lattice_scale * 2;
    fine.lattice.reserve(mesh.lattice.size());
    for (const auto& l : mesh.lattice) fine.lattice.push_back({2 * l[0], 2 * l[1]});
  }

  std::map<std::array<int, 2>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = sorted_pair(a, b);
    const auto [it, inserted] = midpoint.try_emplace(key, static_cast<int>(fine.vertices.size()));
    if (inserted) {
      if (exact) {
        const auto& la = fine.lattice[static_cast<std::size_t>(a)];
        const auto& lb = fine.lattice[static_cast<std::size_t>(b)];
        const std::array<std::int64_t, 2> lm{(la[0] + lb[0]) / 2, (la[1] + lb[1]) / 2};
        fine.lattice.push_back(lm);
        fine.vertices.push_back(lattice_to_point(lm[0], lm[1], fine.lattice_scale, fine.lattice_unit));
      } else {
        const auto& pa = mesh.vertices[static_cast<std::size_t>(a)];
        const auto& pb = mesh.vertices[static_cast<std::size_t>(b)];
        fine.vertices.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
      }
    }
    return it->second;
  };

  fine.triangles.reserve(mesh.triangles.size() * 4);
  for (const auto& tri : mesh.triangles) {
    const int v0 = tri.v[0];
    const int v1 = tri.v[1];
    const int v2 = tri.v[2];
    const int m01 = mid(v0, v1);
    const int m12 = mid(v1, v2);
    const int m20 = mid(v2, v0);
    fine.triangles.push_back({{v0, m01, m20}, tri.material, tri.assembly});
    fine.triangles.push_back({{m01, v1, m12}, tri.material, tri.assembly});
    fine.triangles.push_back({{m20, m12, v2}, tri.material, tri.assembly});
    fine.triangles.push_back({{m01, m12, m20}, tri.material, tri.assembly});
  }

  fine.boundary_edges.reserve(mesh.boundary_edges.size() * 2);
  for (const auto& e : mesh.boundary_edges) {
    const auto key = sorted_pair(e.v[0], e.v[1]);
    const auto it = midpoint.find(key);
    if (it == midpoint.end()) {
      throw Error(ErrorCode::invalid_argument, "boundary edge is not an edge of any triangle");
    }
    fine.boundary_edges.push_back({{e.v[0], it->second}, e.marker});
    fine.boundary_edges.push_back({{it->second, e.v[1]}, e.marker});
  }
  return fine;
}

void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const PointField> point_fields,
               std::span<const CellField> cell_fields) {
  out << "# vtk DataFile Version 3.0\n";
  out << "sp3hex mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const auto& p : mesh.vertices) {
    out << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
  }
  out << "CELLS " << mesh.triangles.size() << ' ' << mesh.triangles.size() * 4 << '\n';
  for (const auto& t : mesh.triangles) {
    out << "3 " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << '\n';
  }
  out << "CELL_TYPES " << mesh.triangles.size() << '\n';
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) out << "5\n";

  out << "CELL_DATA " << mesh.triangles.size() << '\n';
  out << "SCALARS material_id int 1\nLOOKUP_TABLE default\n";
  for (const auto& t : mesh.triangles) out << t.material << '\n';
  out << "SCALARS assembly_id int 1\nLOOKUP_TABLE default\n";
  for (const auto& t : mesh.triangles) out << t.assembly << '\n';
  for (const auto& f : cell_fields) {
    if (f.values.size() != mesh.triangles.size()) {
      throw Error(ErrorCode::invalid_argument, "cell field '" + f.name + "' has wrong length");
    }
    out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : f.values) out << format_double(v) << '\n';
  }

  if (!point_fields.empty()) {
    out << "POINT_DATA " << mesh.vertices.size() << '\n';
    for (const auto& f : point_fields) {
      if (f.values.size() != mesh.vertices.size()) {
        throw Error(ErrorCode::invalid_argument, "point field '" + f.name + "' has wrong length");
      }
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) out << format_double(v) << '\n';
    }
  }
}

void write_vtk(const std::string& path, const Mesh& mesh, std::span<const PointField> point_fields,
               std::span<const CellField> cell_fields) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  write_vtk(out, mesh, point_fields, cell_fields);
  if (!out) throw Error(ErrorCode::io_error, "failed writing '" + path + "'");
}

}  // namespace sp3hex::geometry
