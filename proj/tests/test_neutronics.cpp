#include "sp3hex/error.hpp"
#include "sp3hex/fem/assembly.hpp"
#include "sp3hex/geometry/mesh.hpp"
#include "sp3hex/linalg/eigs.hpp"
#include "sp3hex/neutronics/operators.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sp3hex;
using namespace sp3hex::neutronics;
using geometry::BoundaryKind;

namespace {

RawMaterial iaea_fuel() {
  RawMaterial r;
  r.id = 1;
  r.name = "fuel";
  r.diffusion = {1.5, 0.4};
  r.sigma_a = std::vector<double>{0.01, 0.08};
  r.scatter = std::vector<std::vector<double>>{{0.1922222, 0.02}, {0.0, 0.7533333}};
  r.nu_sigma_f = {0.0, 0.135};
  return r;
}

RawMaterial iaea_reflector() {
  RawMaterial r;
  r.id = 4;
  r.name = "reflector";
  r.diffusion = {1.5, 0.4};
  r.sigma_a = std::vector<double>{0.0, 0.01};
  r.scatter = std::vector<std::vector<double>>{{0.1822222, 0.04}, {0.0, 0.8233333}};
  r.nu_sigma_f = {0.0, 0.0};
  return r;
}

RawMaterial one_group(int id, double d, double sigma_r, double nu_sigma_f) {
  RawMaterial r;
  r.id = id;
  r.diffusion = {d};
  r.sigma_r = std::vector<double>{sigma_r};
  r.nu_sigma_f = {nu_sigma_f};
  return r;
}

KineticsData kinetics(int groups) {
  KineticsData k;
  k.beta = {6.5e-3};
  k.decay = {0.08};
  k.velocity = groups == 2 ? std::vector<double>{1.25e7, 2.5e5} : std::vector<double>{1.0e6};
  return k;
}

std::shared_ptr<const fem::FeSpace> space_for(std::vector<geometry::HexCell> cells, int p, int n,
                                              double pitch = 20.0) {
  geometry::CoreLayout layout{pitch, std::move(cells), BoundaryKind::marshak};
  auto mesh = std::make_shared<const geometry::Mesh>(geometry::build_core_mesh(layout, n));
  return std::make_shared<const fem::FeSpace>(mesh, p);
}

MaterialTable table(std::initializer_list<RawMaterial> raws) {
  MaterialTable t;
  for (const auto& r : raws) t.emplace(r.id, derive_sp3_constants(r));
  return t;
}

double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b) {
  const auto da = to_dense(a);
  const auto db = to_dense(b);
  double m = 0.0;
  for (std::size_t k = 0; k < da.size(); ++k) m = std::max(m, std::abs(da[k] - db[k]));
  return m;
}

}  // namespace

TEST(Materials, TransportFromDiffusion) {
  const MaterialData m = derive_sp3_constants(one_group(1, 1.5, 0.03, 0.0));
  EXPECT_NEAR(m.sigma_tr[0], 0.222222, 1e-6);
  EXPECT_EQ(m.sigma_t[0], m.sigma_tr[0]);
  EXPECT_EQ(m.d0[0], 1.5);
  EXPECT_DOUBLE_EQ(m.d2[0], 9.0 / (7.0 * m.sigma_t[0]));
  const MaterialData alt = derive_sp3_constants(one_group(1, 1.5, 0.03, 0.0), D2Convention::thirty_five);
  EXPECT_DOUBLE_EQ(alt.d2[0], 9.0 / (35.0 * m.sigma_t[0]));
}

TEST(Materials, RemovalFromAbsorptionForm) {
  const MaterialData m = derive_sp3_constants(iaea_fuel());
  EXPECT_NEAR(m.sigma_r[0], 0.03, 1e-15);
  EXPECT_NEAR(m.sigma_r[1], 0.08, 1e-15);
  EXPECT_EQ(m.transfer[0][1], 0.02);
  EXPECT_EQ(m.transfer[1][0], 0.0);
  EXPECT_EQ(m.transfer[0][0], 0.0);
  EXPECT_TRUE(m.fissile());
  EXPECT_FALSE(derive_sp3_constants(iaea_reflector()).fissile());
}

TEST(Materials, InconsistentTotalRejected) {
  RawMaterial r = iaea_fuel();
  (*r.scatter)[0][0] = 0.25;
  EXPECT_THROW((void)derive_sp3_constants(r), Error);
}

TEST(Materials, InputErrors) {
  EXPECT_THROW((void)derive_sp3_constants(one_group(1, 0.0, 0.1, 0.0)), Error);
  RawMaterial r = one_group(1, 1.0, 0.1, 0.0);
  r.sigma_r.reset();
  EXPECT_THROW((void)derive_sp3_constants(r), Error);
  RawMaterial two = iaea_fuel();
  two.scatter.reset();
  EXPECT_THROW((void)derive_sp3_constants(two), Error);
  RawMaterial chi = iaea_fuel();
  chi.chi_n = {0.5, 0.4};
  EXPECT_THROW((void)derive_sp3_constants(chi), Error);
}

TEST(Kinetics, Validation) {
  KineticsData k = kinetics(2);
  EXPECT_NO_THROW(k.validate(2));
  EXPECT_DOUBLE_EQ(k.total_beta(), 6.5e-3);
  EXPECT_THROW(k.validate(1), Error);
  k.decay = {0.0};
  EXPECT_THROW(k.validate(2), Error);
}

// Homogeneous hexagon with reflective boundary: the constant field is the
// fundamental mode and k equals the two-group infinite-medium value.
TEST(Operators, InfiniteMediumMultiplication) {
  const MaterialTable mats = table({iaea_fuel()});
  const MaterialData& m = mats.at(1);
  const double kinf =
      (m.nu_sigma_f[0] + m.nu_sigma_f[1] * m.transfer[0][1] / m.sigma_r[1]) / m.sigma_r[0];
  for (Model model : {Model::diffusion, Model::sp3}) {
    for (int p : {1, 2}) {
      const auto space = space_for({{0, 0, 1}}, p, 6);
      const BlockOperators ops = build_operators(model, space, mats, kinetics(2), BoundaryKind::reflective);
      linalg::EigsOptions opt;
      opt.nev = 1;
      const auto res = linalg::eigs(ops.L, ops.M, opt);
      ASSERT_FALSE(res.eigenvalues.empty());
      EXPECT_NEAR(1.0 / res.eigenvalues[0].real(), kinf, 1e-10) << to_string(model) << " p=" << p;
    }
  }
}

TEST(Operators, ReflectorCoreHasNoFission) {
  const auto space = space_for({{0, 0, 4}, {1, 0, 4}}, 2, 6);
  const BlockOperators ops = build_sp3_operators(space, table({iaea_reflector()}), kinetics(2));
  EXPECT_EQ(ops.M.nnz(), 0u);
  EXPECT_EQ(ops.M.rows, ops.L.rows);
  EXPECT_EQ(ops.R.nnz(), 0u);
}

TEST(Operators, MarshakBlockCoupling) {
  const auto space = space_for({{0, 0, 1}}, 2, 6);
  const MaterialTable mats = table({one_group(1, 1.2, 0.05, 0.0)});
  const auto with = build_sp3_operators(space, mats, kinetics(1), BoundaryKind::marshak);
  const auto without = build_sp3_operators(space, mats, kinetics(1), BoundaryKind::reflective);
  const SparseMatrix bmass = fem::assemble_boundary_mass(*space, 1.0);
  const int n = space->dof_count();
  ASSERT_EQ(with.L.rows, 2 * n);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double diff = with.L.at(a * n + i, b * n + j) - without.L.at(a * n + i, b * n + j);
          EXPECT_NEAR(diff, kMarshak[a][b] * bmass.at(i, j), 1e-14);
        }
      }
    }
  }
  EXPECT_EQ(kMarshak[0][0], 0.5);
  EXPECT_EQ(kMarshak[0][1], -0.375);
  EXPECT_EQ(kMarshak[1][1], 2.625);
}

TEST(Operators, OneGroupSp3IsExactlySymmetric) {
  const auto space = space_for({{0, 0, 1}, {1, 0, 2}, {0, 1, 1}}, 3, 24);
  const MaterialTable mats = table({one_group(1, 1.2, 0.05, 0.01), one_group(2, 0.9, 0.02, 0.0)});
  const auto ops = build_sp3_operators(space, mats, kinetics(1));
  EXPECT_EQ(asymmetry(ops.L), 0.0);
  EXPECT_EQ(asymmetry(ops.W), 0.0);
  EXPECT_TRUE(same_pattern(ops.L, transpose(ops.L)));
}

TEST(Operators, DiffusionComposition) {
  const auto space = space_for({{0, 0, 1}}, 2, 24);
  const MaterialTable mats = table({one_group(1, 1.3, 0.04, 0.0)});
  const auto ops = build_diffusion_operators(space, mats, kinetics(1));
  const SparseMatrix expected =
      add(add(fem::assemble_stiffness(*space, {{1, 1.3}}), fem::assemble_mass(*space, {{1, 0.04}})),
          fem::assemble_boundary_mass(*space, 0.5));
  EXPECT_LE(max_abs_diff(ops.L, expected), 1e-15);
}

TEST(Operators, Sp3FirstFieldMatchesDiffusion) {
  const auto space = space_for({{0, 0, 1}, {1, 0, 4}}, 1, 24);
  const MaterialTable mats = table({iaea_fuel(), iaea_reflector()});
  const auto sp3 = build_sp3_operators(space, mats, kinetics(2));
  const auto dif = build_diffusion_operators(space, mats, kinetics(2));
  const int nd = dif.L.rows;
  for (int i = 0; i < nd; ++i) {
    for (int p = dif.L.row_ptr[static_cast<std::size_t>(i)]; p < dif.L.row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
      const int j = dif.L.col_idx[static_cast<std::size_t>(p)];
      EXPECT_EQ(sp3.L.at(i, j), dif.L.values[static_cast<std::size_t>(p)]);
    }
  }
}

TEST(Operators, FissionSupport) {
  const auto space = space_for({{0, 0, 1}, {1, 0, 4}, {2, 0, 4}}, 2, 6);
  const MaterialTable mats = table({iaea_fuel(), iaea_reflector()});
  const auto ops = build_diffusion_operators(space, mats, kinetics(2));
  std::vector<bool> touches(static_cast<std::size_t>(space->dof_count()), false);
  for (std::size_t t = 0; t < space->mesh().triangles.size(); ++t) {
    if (space->mesh().triangles[t].material != 1) continue;
    for (int d : space->cell_dofs(t)) touches[static_cast<std::size_t>(d)] = true;
  }
  const auto rows = nonzero_rows(ops.M);
  const int n = space->dof_count();
  for (int r = 0; r < ops.M.rows; ++r) {
    if (rows[static_cast<std::size_t>(r)]) EXPECT_TRUE(touches[static_cast<std::size_t>(r % n)]) << r;
  }
}

TEST(Operators, ZeroFluxRemovesBoundaryDofs) {
  const auto space = space_for({{0, 0, 1}}, 3, 24);
  const MaterialTable mats = table({iaea_fuel()});
  const auto ops = build_sp3_operators(space, mats, kinetics(2), BoundaryKind::zero_flux);
  const int free = space->dof_count() - static_cast<int>(space->boundary_dof_list().size());
  EXPECT_EQ(ops.layout.flux_block(), free);
  EXPECT_EQ(ops.L.rows, 4 * free);
  EXPECT_EQ(ops.I_blk.rows, 4 * free);
  EXPECT_EQ(ops.I_blk.cols, space->dof_count());
  EXPECT_EQ(ops.R.cols, 4 * free);
  EXPECT_EQ(ops.Lambda.rows, space->dof_count());
}

TEST(Operators, ConstantIsInfiniteMediumMode) {
  const auto space = space_for({{0, 0, 1}, {1, 0, 1}}, 2, 24);
  const MaterialTable mats = table({one_group(1, 1.1, 0.03, 0.04)});
  const auto ops = build_diffusion_operators(space, mats, kinetics(1), BoundaryKind::reflective);
  const std::vector<double> ones(static_cast<std::size_t>(ops.L.rows), 1.0);
  std::vector<double> lx(ones.size()), mx(ones.size());
  spmv(ops.L, ones, lx);
  spmv(ops.M, ones, mx);
  for (std::size_t i = 0; i < ones.size(); ++i) EXPECT_NEAR(lx[i] * 0.04, mx[i] * 0.03, 1e-15);
}

TEST(Operators, DelayedBlocksShapes) {
  const auto space = space_for({{0, 0, 1}}, 1, 6);
  const auto ops = build_sp3_operators(space, table({iaea_fuel()}), kinetics(2));
  const int n = space->dof_count();
  EXPECT_EQ(ops.W.rows, 4 * n);
  EXPECT_EQ(ops.I_blk.rows, 4 * n);
  EXPECT_EQ(ops.I_blk.cols, n);
  EXPECT_EQ(ops.R.rows, n);
  EXPECT_EQ(ops.Lambda.rows, n);
  EXPECT_EQ(max_abs_diff(ops.Lambda, scaled(ops.S, 0.08)), 0.0);
  // I = [E; -2E] in field blocks.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) EXPECT_EQ(ops.I_blk.at(2 * n + i, j), -2.0 * ops.I_blk.at(i, j));
  }
}

TEST(Operators, UnknownMaterial) {
  const auto space = space_for({{0, 0, 7}}, 1, 6);
  try {
    (void)build_sp3_operators(space, table({iaea_fuel()}), kinetics(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_material);
  }
}
