#pragma once

#include "sp3hex/fem/fe_space.hpp"
#include "sp3hex/fem/sparse.hpp"
#include "sp3hex/geometry/core_layout.hpp"
#include "sp3hex/neutronics/materials.hpp"

#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace sp3hex::neutronics {

enum class Model { diffusion, sp3 };

[[nodiscard]] Model parse_model(std::string_view text);
[[nodiscard]] std::string_view to_string(Model m) noexcept;

/// Unknown ordering. Flux unknowns are (field, group, dof) with the dof index
/// running fastest over `flux_dofs`; precursor unknowns are (group, dof) over
/// `precursor_dofs`. Both lists are sorted scalar-space dofs.
struct FieldLayout {
  Model model = Model::diffusion;
  int groups = 0;
  int fields = 1;
  int precursor_groups = 0;
  int scalar_dofs = 0;
  std::vector<int> flux_dofs;
  /// Precursors live on the whole scalar space, boundary included.
  std::vector<int> precursor_dofs;

  [[nodiscard]] int flux_block() const noexcept { return static_cast<int>(flux_dofs.size()); }
  [[nodiscard]] int flux_size() const noexcept { return fields * groups * flux_block(); }
  [[nodiscard]] int precursor_size() const noexcept {
    return precursor_groups * static_cast<int>(precursor_dofs.size());
  }
  [[nodiscard]] int flux_offset(int field, int group) const noexcept {
    return (field * groups + group) * flux_block();
  }

  /// Physical scalar flux of one group on the full scalar space: phi for
  /// diffusion and phi0 - 2 phi2 for SP3. Removed dofs are zero.
  [[nodiscard]] std::vector<double> scalar_flux(std::span<const double> x, int group) const;
};

/// Discretized blocks. L, M, W act on flux unknowns; I_blk maps precursors to
/// flux rows; R maps flux to precursor rows; Lambda and S are precursor blocks.
struct BlockOperators {
  FieldLayout layout;
  std::shared_ptr<const fem::FeSpace> space;
  MaterialTable materials;
  KineticsData kinetics;
  geometry::BoundaryKind bc = geometry::BoundaryKind::marshak;
  SparseMatrix L;
  SparseMatrix M;
  SparseMatrix W;
  SparseMatrix I_blk;
  SparseMatrix R;
  SparseMatrix Lambda;
  SparseMatrix S;
};

[[nodiscard]] BlockOperators build_sp3_operators(std::shared_ptr<const fem::FeSpace> space,
                                                 const MaterialTable& materials, const KineticsData& kinetics,
                                                 geometry::BoundaryKind bc = geometry::BoundaryKind::marshak,
                                                 Execution exec = Execution::parallel);

[[nodiscard]] BlockOperators build_diffusion_operators(std::shared_ptr<const fem::FeSpace> space,
                                                       const MaterialTable& materials,
                                                       const KineticsData& kinetics,
                                                       geometry::BoundaryKind bc = geometry::BoundaryKind::marshak,
                                                       Execution exec = Execution::parallel);

[[nodiscard]] BlockOperators build_operators(Model model, std::shared_ptr<const fem::FeSpace> space,
                                             const MaterialTable& materials, const KineticsData& kinetics,
                                             geometry::BoundaryKind bc = geometry::BoundaryKind::marshak,
                                             Execution exec = Execution::parallel);

/// Field-coupling matrix of the Marshak boundary term.
inline constexpr double kMarshak[2][2] = {{0.5, -0.375}, {-0.375, 2.625}};

}  // namespace sp3hex::neutronics
