#include "sp3hex/fem/fe_space.hpp"

#include "sp3hex/error.hpp"

#include <algorithm>
#include <numeric>

namespace sp3hex::fem {
namespace {

constexpr int kEdgeVertices[3][2] = {{0, 1}, {1, 2}, {2, 0}};

int find_position(const SparseMatrix& pattern, int row, int col) {
  const auto begin = pattern.col_idx.begin() + pattern.row_ptr[static_cast<std::size_t>(row)];
  const auto end = pattern.col_idx.begin() + pattern.row_ptr[static_cast<std::size_t>(row) + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) {
    throw Error(ErrorCode::invalid_argument, "entry outside the space sparsity pattern");
  }
  return static_cast<int>(it - pattern.col_idx.begin());
}

template <typename Items>
void build_row_index(int rows, std::size_t items, int nloc, const Items& dofs_of,
                     std::vector<int>& ptr, std::vector<FeSpace::Contribution>& out) {
  ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (std::size_t t = 0; t < items; ++t) {
    for (int d : dofs_of(t)) ++ptr[static_cast<std::size_t>(d) + 1];
  }
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  out.resize(static_cast<std::size_t>(ptr.back()));
  std::vector<int> next(ptr.begin(), ptr.end() - 1);
  for (std::size_t t = 0; t < items; ++t) {
    const auto dofs = dofs_of(t);
    for (int i = 0; i < nloc; ++i) {
      const auto d = static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)]);
      out[static_cast<std::size_t>(next[d]++)] = {static_cast<int>(t), i};
    }
  }
}

}  // namespace

FeSpace::FeSpace(std::shared_ptr<const geometry::Mesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree), element_(&lagrange_element(degree)) {
  if (!mesh_) throw Error(ErrorCode::invalid_argument, "FeSpace needs a mesh");
  const auto& m = *mesh_;
  const int p = degree_;
  nloc_ = element_->dofs();
  nvertices_ = static_cast<int>(m.vertices.size());
  const auto edges = m.edges();
  nedges_ = static_cast<int>(edges.size());
  const int per_edge = p - 1;
  const int per_cell = element_->interior_dofs();
  ndofs_ = nvertices_ + nedges_ * per_edge + static_cast<int>(m.triangles.size()) * per_cell;

  auto edge_index = [&](int a, int b) {
    const std::array<int, 2> key = a < b ? std::array{a, b} : std::array{b, a};
    const auto it = std::lower_bound(edges.begin(), edges.end(), key);
    if (it == edges.end() || *it != key) throw Error(ErrorCode::invalid_argument, "edge not in mesh");
    return static_cast<int>(it - edges.begin());
  };
  // Global dof of the node at distance t (1..p-1) from vertex a along edge (a, b).
  auto edge_dof = [&](int a, int b, int t) {
    const int base = nvertices_ + edge_index(a, b) * per_edge;
    return a < b ? base + t - 1 : base + p - 1 - t;
  };

  const std::size_t ncells = m.triangles.size();
  cell_dofs_.resize(ncells * static_cast<std::size_t>(nloc_));
  for (std::size_t t = 0; t < ncells; ++t) {
    const auto& tri = m.triangles[t];
    int* out = cell_dofs_.data() + t * static_cast<std::size_t>(nloc_);
    for (int k = 0; k < 3; ++k) out[k] = tri.v[static_cast<std::size_t>(k)];
    for (int e = 0; e < 3; ++e) {
      const int a = tri.v[static_cast<std::size_t>(kEdgeVertices[e][0])];
      const int b = tri.v[static_cast<std::size_t>(kEdgeVertices[e][1])];
      for (int s = 1; s < p; ++s) out[3 + e * per_edge + s - 1] = edge_dof(a, b, s);
    }
    const int interior_base = nvertices_ + nedges_ * per_edge + static_cast<int>(t) * per_cell;
    for (int k = 0; k < per_cell; ++k) out[3 + 3 * per_edge + k] = interior_base + k;
  }

  const auto nbe = m.boundary_edges.size();
  boundary_dofs_.resize(nbe * static_cast<std::size_t>(p + 1));
  for (std::size_t b = 0; b < nbe; ++b) {
    const auto& e = m.boundary_edges[b];
    int* out = boundary_dofs_.data() + b * static_cast<std::size_t>(p + 1);
    out[0] = e.v[0];
    for (int s = 1; s < p; ++s) out[s] = edge_dof(e.v[0], e.v[1], s);
    out[p] = e.v[1];
  }
  boundary_dof_list_ = boundary_dofs_;
  std::sort(boundary_dof_list_.begin(), boundary_dof_list_.end());
  boundary_dof_list_.erase(std::unique(boundary_dof_list_.begin(), boundary_dof_list_.end()),
                           boundary_dof_list_.end());

  dof_points_.resize(static_cast<std::size_t>(ndofs_));
  for (int v = 0; v < nvertices_; ++v) dof_points_[static_cast<std::size_t>(v)] = m.vertices[static_cast<std::size_t>(v)];
  for (int e = 0; e < nedges_; ++e) {
    const auto& pa = m.vertices[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)][0])];
    const auto& pb = m.vertices[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)][1])];
    for (int s = 1; s < p; ++s) {
      const double f = static_cast<double>(s) / p;
      dof_points_[static_cast<std::size_t>(nvertices_ + e * per_edge + s - 1)] = {pa.x + f * (pb.x - pa.x),
                                                                                  pa.y + f * (pb.y - pa.y)};
    }
  }
  for (std::size_t t = 0; t < ncells; ++t) {
    const auto g = cell_geometry(t);
    for (int k = 0; k < per_cell; ++k) {
      const auto [xi, eta] = element_->node_point(3 + 3 * per_edge + k);
      dof_points_[static_cast<std::size_t>(cell_dofs_[t * static_cast<std::size_t>(nloc_) +
                                                      static_cast<std::size_t>(3 + 3 * per_edge + k)])] = {
          g.x0 + g.j00 * xi + g.j01 * eta, g.y0 + g.j10 * xi + g.j11 * eta};
    }
  }

  // Sparsity pattern from cell connectivity.
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(ndofs_));
  for (std::size_t t = 0; t < ncells; ++t) {
    const auto dofs = cell_dofs(t);
    for (int i : dofs) {
      auto& row = adjacency[static_cast<std::size_t>(i)];
      row.insert(row.end(), dofs.begin(), dofs.end());
    }
  }
  pattern_.rows = ndofs_;
  pattern_.cols = ndofs_;
  pattern_.row_ptr.assign(static_cast<std::size_t>(ndofs_) + 1, 0);
  for (int i = 0; i < ndofs_; ++i) {
    auto& row = adjacency[static_cast<std::size_t>(i)];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    pattern_.row_ptr[static_cast<std::size_t>(i) + 1] = pattern_.row_ptr[static_cast<std::size_t>(i)] +
                                                        static_cast<int>(row.size());
  }
  pattern_.col_idx.reserve(static_cast<std::size_t>(pattern_.row_ptr.back()));
  for (auto& row : adjacency) {
    pattern_.col_idx.insert(pattern_.col_idx.end(), row.begin(), row.end());
    std::vector<int>().swap(row);
  }
  pattern_.values.assign(pattern_.col_idx.size(), 0.0);

  const auto nn = static_cast<std::size_t>(nloc_) * static_cast<std::size_t>(nloc_);
  cell_positions_.resize(ncells * nn);
  for (std::size_t t = 0; t < ncells; ++t) {
    const auto dofs = cell_dofs(t);
    for (int i = 0; i < nloc_; ++i) {
      for (int j = 0; j < nloc_; ++j) {
        cell_positions_[t * nn + static_cast<std::size_t>(i * nloc_ + j)] =
            find_position(pattern_, dofs[static_cast<std::size_t>(i)], dofs[static_cast<std::size_t>(j)]);
      }
    }
  }
  const auto ne = static_cast<std::size_t>(p + 1);
  edge_positions_.resize(nbe * ne * ne);
  for (std::size_t b = 0; b < nbe; ++b) {
    const auto dofs = boundary_edge_dofs(b);
    for (std::size_t i = 0; i < ne; ++i) {
      for (std::size_t j = 0; j < ne; ++j) {
        edge_positions_[b * ne * ne + i * ne + j] = find_position(pattern_, dofs[i], dofs[j]);
      }
    }
  }

  build_row_index(ndofs_, ncells, nloc_, [&](std::size_t t) { return cell_dofs(t); }, row_cell_ptr_,
                  row_cell_items_);
  build_row_index(ndofs_, nbe, p + 1, [&](std::size_t b) { return boundary_edge_dofs(b); }, row_edge_ptr_,
                  row_edge_items_);
}

FeSpace::CellGeometry FeSpace::cell_geometry(std::size_t t) const {
  const auto& tri = mesh_->triangles[t];
  const auto& p0 = mesh_->vertices[static_cast<std::size_t>(tri.v[0])];
  const auto& p1 = mesh_->vertices[static_cast<std::size_t>(tri.v[1])];
  const auto& p2 = mesh_->vertices[static_cast<std::size_t>(tri.v[2])];
  CellGeometry g{};
  g.x0 = p0.x;
  g.y0 = p0.y;
  g.j00 = p1.x - p0.x;
  g.j01 = p2.x - p0.x;
  g.j10 = p1.y - p0.y;
  g.j11 = p2.y - p0.y;
  g.det = g.j00 * g.j11 - g.j01 * g.j10;
  return g;
}

int FeSpace::locate(double x, double y, double tolerance) const {
  for (std::size_t t = 0; t < mesh_->triangles.size(); ++t) {
    const auto g = cell_geometry(t);
    const double dx = x - g.x0;
    const double dy = y - g.y0;
    const double xi = (g.j11 * dx - g.j01 * dy) / g.det;
    const double eta = (-g.j10 * dx + g.j00 * dy) / g.det;
    if (xi >= -tolerance && eta >= -tolerance && xi + eta <= 1.0 + tolerance) return static_cast<int>(t);
  }
  return -1;
}

}  // namespace sp3hex::fem
