#include "sp3hex/neutronics/operators.hpp"

#include "sp3hex/error.hpp"
#include "sp3hex/fem/assembly.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <utility>

namespace sp3hex::neutronics {

using fem::FeSpace;
using fem::MaterialCoefficients;

namespace {

using Values = std::vector<double>;

// Block matrix in assembly: block (bi, bj) holds values on the space pattern.
struct Blocks {
  int rows = 0;
  int cols = 0;
  std::map<std::pair<int, int>, Values> entries;

  Blocks(int r, int c) : rows(r), cols(c) {}

  void add(int bi, int bj, const Values& v, double scale) {
    if (scale == 0.0) return;
    auto [it, inserted] = entries.try_emplace({bi, bj});
    Values& dst = it->second;
    if (inserted) dst.assign(v.size(), 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) dst[k] += scale * v[k];
  }
};

// Scalar matrices with coefficients gathered per material; zero coefficient
// sets are skipped (returned empty).
class ScalarForms {
 public:
  ScalarForms(const FeSpace& space, std::vector<int> mesh_materials, Execution exec)
      : space_(space), present_(std::move(mesh_materials)), exec_(exec) {}

  Values mass(const std::function<double(int)>& coeff) const {
    MaterialCoefficients c;
    if (!collect(coeff, c)) return {};
    return fem::assemble_mass(space_, c, exec_).values;
  }
  Values stiffness(const std::function<double(int)>& coeff) const {
    MaterialCoefficients c;
    if (!collect(coeff, c)) return {};
    return fem::assemble_stiffness(space_, c, exec_).values;
  }
  const Values& boundary() const {
    if (boundary_.empty()) boundary_ = fem::assemble_boundary_mass(space_, 1.0, exec_).values;
    return boundary_;
  }

 private:
  bool collect(const std::function<double(int)>& coeff, MaterialCoefficients& c) const {
    bool any = false;
    for (int id : present_) {
      const double v = coeff(id);
      c[id] = v;
      any = any || v != 0.0;
    }
    return any;
  }

  const FeSpace& space_;
  std::vector<int> present_;
  Execution exec_;
  mutable Values boundary_;
};

void add_to(Values& dst, const Values& src, double scale = 1.0) {
  if (src.empty()) return;
  if (dst.empty()) dst.assign(src.size(), 0.0);
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] += scale * src[k];
}

// Assembles the block matrix with rows restricted to row_dofs and columns to col_dofs.
SparseMatrix compose(const SparseMatrix& pattern, const Blocks& blocks, const std::vector<int>& row_dofs,
                     const std::vector<int>& col_dofs) {
  const int n = pattern.rows;
  std::vector<int> col_map(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < col_dofs.size(); ++k) col_map[static_cast<std::size_t>(col_dofs[k])] = static_cast<int>(k);
  const int nr = static_cast<int>(row_dofs.size());
  const int nc = static_cast<int>(col_dofs.size());

  // Block columns present in each block row, ascending.
  std::vector<std::vector<std::pair<int, const Values*>>> by_row(static_cast<std::size_t>(blocks.rows));
  for (const auto& [key, values] : blocks.entries) {
    by_row[static_cast<std::size_t>(key.first)].emplace_back(key.second, &values);
  }

  SparseMatrix out;
  out.rows = blocks.rows * nr;
  out.cols = blocks.cols * nc;
  out.row_ptr.assign(static_cast<std::size_t>(out.rows) + 1, 0);

  // Row lengths first so that rows can be filled independently.
  std::vector<int> kept(static_cast<std::size_t>(nr), 0);
  for (int r = 0; r < nr; ++r) {
    const int i = row_dofs[static_cast<std::size_t>(r)];
    int count = 0;
    for (int p = pattern.row_ptr[static_cast<std::size_t>(i)]; p < pattern.row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
      if (col_map[static_cast<std::size_t>(pattern.col_idx[static_cast<std::size_t>(p)])] >= 0) ++count;
    }
    kept[static_cast<std::size_t>(r)] = count;
  }
  for (int bi = 0; bi < blocks.rows; ++bi) {
    const int nb = static_cast<int>(by_row[static_cast<std::size_t>(bi)].size());
    for (int r = 0; r < nr; ++r) {
      const std::size_t row = static_cast<std::size_t>(bi) * static_cast<std::size_t>(nr) + static_cast<std::size_t>(r);
      out.row_ptr[row + 1] = nb * kept[static_cast<std::size_t>(r)];
    }
  }
  for (std::size_t k = 0; k < static_cast<std::size_t>(out.rows); ++k) out.row_ptr[k + 1] += out.row_ptr[k];
  out.col_idx.resize(static_cast<std::size_t>(out.row_ptr.back()));
  out.values.resize(out.col_idx.size());

#pragma omp parallel for schedule(static)
  for (int row = 0; row < out.rows; ++row) {
    const int bi = row / std::max(nr, 1);
    const int r = row % std::max(nr, 1);
    const int i = row_dofs[static_cast<std::size_t>(r)];
    auto pos = static_cast<std::size_t>(out.row_ptr[static_cast<std::size_t>(row)]);
    for (const auto& [bj, values] : by_row[static_cast<std::size_t>(bi)]) {
      for (int p = pattern.row_ptr[static_cast<std::size_t>(i)]; p < pattern.row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
        const int c = col_map[static_cast<std::size_t>(pattern.col_idx[static_cast<std::size_t>(p)])];
        if (c < 0) continue;
        out.col_idx[pos] = bj * nc + c;
        out.values[pos] = (*values)[static_cast<std::size_t>(p)];
        ++pos;
      }
    }
  }
  return out;
}

std::vector<int> mesh_materials(const geometry::Mesh& mesh) {
  std::vector<int> ids;
  for (const auto& t : mesh.triangles) ids.push_back(t.material);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

BlockOperators build(Model model, std::shared_ptr<const FeSpace> space_ptr, const MaterialTable& materials,
                     const KineticsData& kinetics, geometry::BoundaryKind bc, Execution exec) {
  if (!space_ptr) throw Error(ErrorCode::invalid_argument, "operators need a finite element space");
  const FeSpace& space = *space_ptr;
  const int groups = group_count(materials);
  kinetics.validate(groups);
  const std::vector<int> present = mesh_materials(space.mesh());
  for (int id : present) {
    if (!materials.contains(id)) {
      throw Error(ErrorCode::unknown_material, "mesh material " + std::to_string(id) + " has no cross sections");
    }
  }
  auto mat = [&](int id) -> const MaterialData& { return materials.at(id); };

  BlockOperators ops;
  ops.space = space_ptr;
  ops.materials = materials;
  ops.kinetics = kinetics;
  ops.bc = bc;

  FieldLayout& lay = ops.layout;
  lay.model = model;
  lay.groups = groups;
  lay.fields = model == Model::sp3 ? 2 : 1;
  lay.precursor_groups = kinetics.precursor_groups();
  lay.scalar_dofs = space.dof_count();

  std::vector<bool> removed(static_cast<std::size_t>(space.dof_count()), false);
  if (bc == geometry::BoundaryKind::zero_flux) {
    for (int d : space.boundary_dof_list()) removed[static_cast<std::size_t>(d)] = true;
  }
  for (int d = 0; d < space.dof_count(); ++d) {
    if (!removed[static_cast<std::size_t>(d)]) lay.flux_dofs.push_back(d);
  }
  lay.precursor_dofs.resize(static_cast<std::size_t>(space.dof_count()));
  for (int d = 0; d < space.dof_count(); ++d) lay.precursor_dofs[static_cast<std::size_t>(d)] = d;

  const ScalarForms forms(space, present, exec);
  const int fields = lay.fields;
  const int ng = groups;
  auto fb = [ng](int field, int g) { return field * ng + g; };

  const bool marshak = bc == geometry::BoundaryKind::marshak;
  const double kB = model == Model::sp3 ? 1.0 : 0.0;

  // L
  Blocks l(fields * ng, fields * ng);
  for (int g = 0; g < ng; ++g) {
    const auto gi = static_cast<std::size_t>(g);
    const Values removal = forms.mass([&](int id) { return mat(id).sigma_r[gi]; });
    Values a1 = forms.stiffness([&](int id) { return mat(id).d0[gi]; });
    add_to(a1, removal);
    if (marshak) add_to(a1, forms.boundary(), kMarshak[0][0]);
    l.add(fb(0, g), fb(0, g), a1, 1.0);
    if (kB != 0.0) {
      Values bgg;
      add_to(bgg, removal, -2.0);
      if (marshak) add_to(bgg, forms.boundary(), kMarshak[0][1]);
      l.add(fb(0, g), fb(1, g), bgg, 1.0);
      l.add(fb(1, g), fb(0, g), bgg, 1.0);
      Values a2 = forms.stiffness([&](int id) { return mat(id).d2[gi]; });
      add_to(a2, forms.mass([&](int id) { return 5.0 * mat(id).sigma_t[gi] + 4.0 * mat(id).sigma_r[gi]; }));
      if (marshak) add_to(a2, forms.boundary(), kMarshak[1][1]);
      l.add(fb(1, g), fb(1, g), a2, 1.0);
    }
    for (int h = 0; h < ng; ++h) {
      if (h == g) continue;
      const auto hi = static_cast<std::size_t>(h);
      // Transfer from group h into group g.
      const Values s = forms.mass([&](int id) { return mat(id).transfer[hi][gi]; });
      if (s.empty()) continue;
      l.add(fb(0, g), fb(0, h), s, -1.0);
      if (kB != 0.0) {
        l.add(fb(0, g), fb(1, h), s, 2.0);
        l.add(fb(1, g), fb(0, h), s, 2.0);
        l.add(fb(1, g), fb(1, h), s, -4.0);
      }
    }
  }

  // M = c c^T (x) F with c = (1, -2) for SP3.
  const double c[2] = {1.0, -2.0};
  Blocks m(fields * ng, fields * ng);
  for (int g = 0; g < ng; ++g) {
    for (int h = 0; h < ng; ++h) {
      const auto gi = static_cast<std::size_t>(g);
      const auto hi = static_cast<std::size_t>(h);
      const Values f = forms.mass([&](int id) { return mat(id).chi_n[gi] * mat(id).nu_sigma_f[hi]; });
      if (f.empty()) continue;
      for (int a = 0; a < fields; ++a) {
        for (int b = 0; b < fields; ++b) m.add(fb(a, g), fb(b, h), f, c[a] * c[b]);
      }
    }
  }

  // W = [[1, -2], [-2, 9]] (x) V.
  const double w[2][2] = {{1.0, -2.0}, {-2.0, 9.0}};
  Blocks wb(fields * ng, fields * ng);
  for (int g = 0; g < ng; ++g) {
    const double inv_v = 1.0 / kinetics.velocity[static_cast<std::size_t>(g)];
    const Values v = forms.mass([&](int) { return inv_v; });
    for (int a = 0; a < fields; ++a) {
      for (int b = 0; b < fields; ++b) wb.add(fb(a, g), fb(b, g), v, w[a][b]);
    }
  }

  // Delayed blocks.
  const int np = lay.precursor_groups;
  Blocks ib(fields * ng, np);
  Blocks rb(np, fields * ng);
  Blocks lam(np, np);
  Blocks sb(np, np);
  const Values unit = np > 0 ? forms.mass([](int) { return 1.0; }) : Values{};
  for (int k = 0; k < np; ++k) {
    const auto ki = static_cast<std::size_t>(k);
    for (int g = 0; g < ng; ++g) {
      const auto gi = static_cast<std::size_t>(g);
      const Values e = forms.mass([&](int id) { return mat(id).chi_d[gi] * kinetics.decay[ki]; });
      const Values q = forms.mass([&](int id) { return kinetics.beta[ki] * mat(id).nu_sigma_f[gi]; });
      for (int a = 0; a < fields; ++a) {
        if (!e.empty()) ib.add(fb(a, g), k, e, c[a]);
        if (!q.empty()) rb.add(k, fb(a, g), q, c[a]);
      }
    }
    lam.add(k, k, unit, kinetics.decay[ki]);
    sb.add(k, k, unit, 1.0);
  }

  const SparseMatrix& pattern = space.pattern();
  ops.L = compose(pattern, l, lay.flux_dofs, lay.flux_dofs);
  ops.M = compose(pattern, m, lay.flux_dofs, lay.flux_dofs);
  ops.W = compose(pattern, wb, lay.flux_dofs, lay.flux_dofs);
  ops.I_blk = compose(pattern, ib, lay.flux_dofs, lay.precursor_dofs);
  ops.R = compose(pattern, rb, lay.precursor_dofs, lay.flux_dofs);
  ops.Lambda = compose(pattern, lam, lay.precursor_dofs, lay.precursor_dofs);
  ops.S = compose(pattern, sb, lay.precursor_dofs, lay.precursor_dofs);
  return ops;
}

}  // namespace

Model parse_model(std::string_view text) {
  if (text == "diffusion") return Model::diffusion;
  if (text == "sp3") return Model::sp3;
  throw Error(ErrorCode::invalid_argument, "unknown model '" + std::string(text) + "'");
}

std::string_view to_string(Model m) noexcept { return m == Model::sp3 ? "sp3" : "diffusion"; }

std::vector<double> FieldLayout::scalar_flux(std::span<const double> x, int group) const {
  std::vector<double> phi(static_cast<std::size_t>(scalar_dofs), 0.0);
  const auto n = flux_dofs.size();
  const auto o0 = static_cast<std::size_t>(flux_offset(0, group));
  for (std::size_t k = 0; k < n; ++k) phi[static_cast<std::size_t>(flux_dofs[k])] = x[o0 + k];
  if (fields == 2) {
    const auto o2 = static_cast<std::size_t>(flux_offset(1, group));
    for (std::size_t k = 0; k < n; ++k) phi[static_cast<std::size_t>(flux_dofs[k])] -= 2.0 * x[o2 + k];
  }
  return phi;
}

BlockOperators build_sp3_operators(std::shared_ptr<const FeSpace> space, const MaterialTable& materials,
                                   const KineticsData& kinetics, geometry::BoundaryKind bc, Execution exec) {
  return build(Model::sp3, std::move(space), materials, kinetics, bc, exec);
}

BlockOperators build_diffusion_operators(std::shared_ptr<const FeSpace> space, const MaterialTable& materials,
                                         const KineticsData& kinetics, geometry::BoundaryKind bc,
                                         Execution exec) {
  return build(Model::diffusion, std::move(space), materials, kinetics, bc, exec);
}

BlockOperators build_operators(Model model, std::shared_ptr<const FeSpace> space, const MaterialTable& materials,
                               const KineticsData& kinetics, geometry::BoundaryKind bc, Execution exec) {
  return build(model, std::move(space), materials, kinetics, bc, exec);
}

}  // namespace sp3hex::neutronics
