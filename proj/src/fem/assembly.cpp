#include "sp3hex/fem/assembly.hpp"

#include "sp3hex/error.hpp"
#include "sp3hex/fem/quadrature.hpp"

#include <cmath>
#include <string>

namespace sp3hex::fem {
namespace {

double coefficient(const MaterialCoefficients& coeff, int material) {
  const auto it = coeff.find(material);
  if (it == coeff.end()) {
    throw Error(ErrorCode::missing_coefficient, "no coefficient for material " + std::to_string(material));
  }
  return it->second;
}

// Reduces per-item local matrices into the pattern. The parallel path gathers
// row by row in ascending item order, which reproduces the serial scatter sum
// order exactly.
template <typename Positions, typename Rows>
void reduce(SparseMatrix& out, const std::vector<double>& local, std::size_t items, int nloc,
            const Positions& positions_of, const Rows& contributions_of, Execution exec) {
  const auto nn = static_cast<std::size_t>(nloc) * static_cast<std::size_t>(nloc);
  double* values = out.values.data();
  if (exec == Execution::serial) {
    for (std::size_t t = 0; t < items; ++t) {
      const auto pos = positions_of(t);
      const double* ke = local.data() + t * nn;
      for (std::size_t k = 0; k < nn; ++k) values[pos[k]] += ke[k];
    }
    return;
  }
  const int rows = out.rows;
#pragma omp parallel for schedule(dynamic, 256)
  for (int row = 0; row < rows; ++row) {
    for (const auto& c : contributions_of(row)) {
      const auto t = static_cast<std::size_t>(c.item);
      const auto pos = positions_of(t);
      const double* ke = local.data() + t * nn;
      const auto base = static_cast<std::size_t>(c.local) * static_cast<std::size_t>(nloc);
      for (std::size_t j = 0; j < static_cast<std::size_t>(nloc); ++j) values[pos[base + j]] += ke[base + j];
    }
  }
}

SparseMatrix reduce_cells(const FeSpace& space, const std::vector<double>& local, Execution exec) {
  SparseMatrix out = space.pattern();
  reduce(
      out, local, space.mesh().triangles.size(), space.local_dofs(),
      [&](std::size_t t) { return space.cell_positions(t); }, [&](int row) { return space.row_cells(row); },
      exec);
  return out;
}

template <typename Kernel>
std::vector<double> element_matrices(const FeSpace& space, Kernel kernel, Execution exec) {
  const auto ncells = space.mesh().triangles.size();
  const auto nn = static_cast<std::size_t>(space.local_dofs()) * static_cast<std::size_t>(space.local_dofs());
  std::vector<double> local(ncells * nn);
  const auto n = static_cast<long long>(ncells);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long long t = 0; t < n; ++t) kernel(static_cast<std::size_t>(t), local.data() + static_cast<std::size_t>(t) * nn);
  } else {
    for (long long t = 0; t < n; ++t) kernel(static_cast<std::size_t>(t), local.data() + static_cast<std::size_t>(t) * nn);
  }
  return local;
}

void check_coefficients(const FeSpace& space, const MaterialCoefficients& coeff) {
  for (const auto& a : space.mesh().assemblies) (void)coefficient(coeff, a.material);
  for (const auto& t : space.mesh().triangles) (void)coefficient(coeff, t.material);
}

// Reference coordinates of (x, y) in cell t.
std::array<double, 2> to_reference(const FeSpace::CellGeometry& g, double x, double y) {
  const double dx = x - g.x0;
  const double dy = y - g.y0;
  return {(g.j11 * dx - g.j01 * dy) / g.det, (-g.j10 * dx + g.j00 * dy) / g.det};
}

}  // namespace

SparseMatrix assemble_stiffness(const FeSpace& space, const MaterialCoefficients& coeff, Execution exec) {
  check_coefficients(space, coeff);
  const auto& el = space.element();
  const auto& sxx = el.stiffness_xx();
  const auto& sxy = el.stiffness_xy();
  const auto& syy = el.stiffness_yy();
  const auto nloc = static_cast<std::size_t>(space.local_dofs());
  auto kernel = [&](std::size_t t, double* ke) {
    const auto g = space.cell_geometry(t);
    const double c = coeff.at(space.mesh().triangles[t].material) / std::abs(g.det);
    // |det| J^-1 J^-T
    const double k00 = c * (g.j11 * g.j11 + g.j01 * g.j01);
    const double k01 = -c * (g.j11 * g.j10 + g.j01 * g.j00);
    const double k11 = c * (g.j10 * g.j10 + g.j00 * g.j00);
    for (std::size_t i = 0; i < nloc; ++i) {
      for (std::size_t j = 0; j < nloc; ++j) {
        const std::size_t ij = i * nloc + j;
        const std::size_t ji = j * nloc + i;
        ke[ij] = k00 * sxx[ij] + k01 * (sxy[ij] + sxy[ji]) + k11 * syy[ij];
      }
    }
  };
  return reduce_cells(space, element_matrices(space, kernel, exec), exec);
}

SparseMatrix assemble_mass(const FeSpace& space, const MaterialCoefficients& coeff, Execution exec) {
  check_coefficients(space, coeff);
  const auto& mref = space.element().mass();
  const auto nn = mref.size();
  auto kernel = [&](std::size_t t, double* ke) {
    const auto g = space.cell_geometry(t);
    const double c = coeff.at(space.mesh().triangles[t].material) * std::abs(g.det);
    for (std::size_t k = 0; k < nn; ++k) ke[k] = c * mref[k];
  };
  return reduce_cells(space, element_matrices(space, kernel, exec), exec);
}

SparseMatrix assemble_boundary_mass(const FeSpace& space, double coeff, Execution exec) {
  const auto& mesh = space.mesh();
  const auto& eref = space.element().edge_mass();
  const auto nn = eref.size();
  const auto nbe = mesh.boundary_edges.size();
  std::vector<double> local(nbe * nn);
  for (std::size_t b = 0; b < nbe; ++b) {
    const auto& e = mesh.boundary_edges[b];
    const auto& pa = mesh.vertices[static_cast<std::size_t>(e.v[0])];
    const auto& pb = mesh.vertices[static_cast<std::size_t>(e.v[1])];
    const double c = coeff * std::hypot(pb.x - pa.x, pb.y - pa.y);
    for (std::size_t k = 0; k < nn; ++k) local[b * nn + k] = c * eref[k];
  }
  SparseMatrix out = space.pattern();
  reduce(
      out, local, nbe, space.degree() + 1, [&](std::size_t b) { return space.edge_positions(b); },
      [&](int row) { return space.row_edges(row); }, exec);
  return out;
}

std::vector<double> assemble_load(const FeSpace& space, const ScalarFunction& f, int order) {
  const TriangleRule rule = collapsed_triangle_rule(order);
  const auto& el = space.element();
  const int nloc = space.local_dofs();
  std::vector<double> phi(rule.points.size() * static_cast<std::size_t>(nloc));
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    for (int i = 0; i < nloc; ++i) {
      phi[q * static_cast<std::size_t>(nloc) + static_cast<std::size_t>(i)] =
          el.value(i, rule.points[q][0], rule.points[q][1]);
    }
  }
  std::vector<double> b(static_cast<std::size_t>(space.dof_count()), 0.0);
  for (std::size_t t = 0; t < space.mesh().triangles.size(); ++t) {
    const auto g = space.cell_geometry(t);
    const auto dofs = space.cell_dofs(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto [xi, eta] = rule.points[q];
      const double w = rule.weights[q] * std::abs(g.det) *
                       f(g.x0 + g.j00 * xi + g.j01 * eta, g.y0 + g.j10 * xi + g.j11 * eta);
      for (int i = 0; i < nloc; ++i) {
        b[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])] +=
            w * phi[q * static_cast<std::size_t>(nloc) + static_cast<std::size_t>(i)];
      }
    }
  }
  return b;
}

std::vector<double> assemble_boundary_load(const FeSpace& space, const ScalarFunction& g, int order) {
  const LineRule rule = gauss_legendre(order);
  const int p = space.degree();
  const auto& mesh = space.mesh();
  std::vector<double> b(static_cast<std::size_t>(space.dof_count()), 0.0);
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& edge = mesh.boundary_edges[e];
    const auto& pa = mesh.vertices[static_cast<std::size_t>(edge.v[0])];
    const auto& pb = mesh.vertices[static_cast<std::size_t>(edge.v[1])];
    const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
    const auto dofs = space.boundary_edge_dofs(e);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q];
      const double w = rule.weights[q] * len * g(pa.x + s * (pb.x - pa.x), pa.y + s * (pb.y - pa.y));
      for (int i = 0; i <= p; ++i) {
        b[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])] += w * lagrange_1d(p, i, s);
      }
    }
  }
  return b;
}

std::vector<double> interpolate(const FeSpace& space, const ScalarFunction& f) {
  std::vector<double> u(static_cast<std::size_t>(space.dof_count()));
  const auto& pts = space.dof_points();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(pts[i].x, pts[i].y);
  return u;
}

double evaluate_field(const FeSpace& space, std::span<const double> u, double x, double y) {
  if (u.size() != static_cast<std::size_t>(space.dof_count())) {
    throw Error(ErrorCode::invalid_argument, "field size does not match the space");
  }
  const int t = space.locate(x, y, 1e-10);
  if (t < 0) {
    throw Error(ErrorCode::point_outside_mesh,
                "point (" + std::to_string(x) + ", " + std::to_string(y) + ") is outside the mesh");
  }
  const auto g = space.cell_geometry(static_cast<std::size_t>(t));
  const auto [xi, eta] = to_reference(g, x, y);
  const auto dofs = space.cell_dofs(static_cast<std::size_t>(t));
  double v = 0.0;
  for (int i = 0; i < space.local_dofs(); ++i) {
    v += u[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])] * space.element().value(i, xi, eta);
  }
  return v;
}

double l2_error(const FeSpace& space, std::span<const double> u, const ScalarFunction& exact, int order) {
  const TriangleRule rule = collapsed_triangle_rule(order);
  const auto& el = space.element();
  double sum = 0.0;
  for (std::size_t t = 0; t < space.mesh().triangles.size(); ++t) {
    const auto g = space.cell_geometry(t);
    const auto dofs = space.cell_dofs(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto [xi, eta] = rule.points[q];
      double uh = 0.0;
      for (int i = 0; i < space.local_dofs(); ++i) {
        uh += u[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])] * el.value(i, xi, eta);
      }
      const double d = uh - exact(g.x0 + g.j00 * xi + g.j01 * eta, g.y0 + g.j10 * xi + g.j11 * eta);
      sum += rule.weights[q] * std::abs(g.det) * d * d;
    }
  }
  return std::sqrt(sum);
}

double h1_seminorm_error(const FeSpace& space, std::span<const double> u,
                         const std::function<std::array<double, 2>(double, double)>& grad, int order) {
  const TriangleRule rule = collapsed_triangle_rule(order);
  const auto& el = space.element();
  double sum = 0.0;
  for (std::size_t t = 0; t < space.mesh().triangles.size(); ++t) {
    const auto g = space.cell_geometry(t);
    const auto dofs = space.cell_dofs(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto [xi, eta] = rule.points[q];
      double gx = 0.0;
      double gy = 0.0;
      for (int i = 0; i < space.local_dofs(); ++i) {
        const auto gr = el.gradient(i, xi, eta);
        const double ui = u[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])];
        // J^-T applied to the reference gradient.
        gx += ui * (g.j11 * gr[0] - g.j10 * gr[1]) / g.det;
        gy += ui * (-g.j01 * gr[0] + g.j00 * gr[1]) / g.det;
      }
      const auto ex = grad(g.x0 + g.j00 * xi + g.j01 * eta, g.y0 + g.j10 * xi + g.j11 * eta);
      sum += rule.weights[q] * std::abs(g.det) * ((gx - ex[0]) * (gx - ex[0]) + (gy - ex[1]) * (gy - ex[1]));
    }
  }
  return std::sqrt(sum);
}

std::vector<double> integrate_per_assembly(const FeSpace& space, std::span<const double> u,
                                           const MaterialCoefficients& coeff) {
  check_coefficients(space, coeff);
  const auto& mesh = space.mesh();
  const auto& ints = space.element().basis_integrals();
  std::vector<double> out(mesh.assemblies.size(), 0.0);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double c = coeff.at(tri.material);
    if (c == 0.0) continue;
    const auto g = space.cell_geometry(t);
    const auto dofs = space.cell_dofs(t);
    double s = 0.0;
    for (int i = 0; i < space.local_dofs(); ++i) {
      s += ints[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])];
    }
    out[static_cast<std::size_t>(tri.assembly)] += c * std::abs(g.det) * s;
  }
  return out;
}

}  // namespace sp3hex::fem
