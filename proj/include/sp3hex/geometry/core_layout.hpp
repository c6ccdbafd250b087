#pragma once

#include <set>
#include <string_view>
#include <vector>

namespace sp3hex::geometry {

enum class BoundaryKind {
  marshak,     // Robin partial-current condition
  zero_flux,   // homogeneous Dirichlet
  reflective,  // zero net current, no boundary term
};

[[nodiscard]] BoundaryKind parse_boundary_kind(std::string_view text);
[[nodiscard]] std::string_view to_string(BoundaryKind kind) noexcept;

/// One hexagonal assembly in axial lattice coordinates.
///
/// Hexagons are flat-topped with flat-to-flat size `pitch`. The centre of cell
/// (q, r) sits at x = 1.5 R q, y = pitch (r + q / 2) with R = pitch / sqrt(3).
struct HexCell {
  int q = 0;
  int r = 0;
  int material = 0;

  friend bool operator==(const HexCell&, const HexCell&) = default;
};

struct CoreLayout {
  double pitch_cm = 0.0;
  std::vector<HexCell> cells;
  BoundaryKind bc = BoundaryKind::marshak;

  /// Builds a layout from a hexagon-shaped text map of radius R.
  ///
  /// The map has 2R+1 rows listed top (r = +R) to bottom (r = -R); row r holds
  /// the cells with q from max(-R, -r-R) to min(R, -r+R), left to right. Zero
  /// marks an empty lattice site.
  [[nodiscard]] static CoreLayout from_rows(double pitch_cm,
                                            const std::vector<std::vector<int>>& rows,
                                            BoundaryKind bc);

  /// Inverse of from_rows over the smallest enclosing hexagonal map.
  [[nodiscard]] std::vector<std::vector<int>> to_rows() const;

  /// Throws on non-positive pitch, duplicate sites, unknown materials or a
  /// cell set that is not edge-connected.
  void validate(const std::set<int>& known_materials) const;

  [[nodiscard]] std::size_t assembly_count() const noexcept { return cells.size(); }
  [[nodiscard]] double hexagon_area() const noexcept;
};

/// Axial neighbour offsets in counter-clockwise order starting at +q.
inline constexpr int kHexNeighbors[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};

}  // namespace sp3hex::geometry
