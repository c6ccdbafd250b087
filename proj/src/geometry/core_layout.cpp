#include "sp3hex/geometry/core_layout.hpp"

#include "sp3hex/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <string>

namespace sp3hex::geometry {

BoundaryKind parse_boundary_kind(std::string_view text) {
  if (text == "marshak") return BoundaryKind::marshak;
  if (text == "zero-flux") return BoundaryKind::zero_flux;
  if (text == "reflective") return BoundaryKind::reflective;
  throw Error(ErrorCode::parse_error, "unknown boundary condition '" + std::string(text) + "'");
}

std::string_view to_string(BoundaryKind kind) noexcept {
  switch (kind) {
    case BoundaryKind::marshak: return "marshak";
    case BoundaryKind::zero_flux: return "zero-flux";
    case BoundaryKind::reflective: return "reflective";
  }
  return "marshak";
}

CoreLayout CoreLayout::from_rows(double pitch_cm, const std::vector<std::vector<int>>& rows,
                                 BoundaryKind bc) {
  if (rows.empty() || rows.size() % 2 == 0) {
    throw Error(ErrorCode::parse_error, "hexagonal core map needs an odd number of rows");
  }
  const int radius = static_cast<int>(rows.size() / 2);
  CoreLayout layout;
  layout.pitch_cm = pitch_cm;
  layout.bc = bc;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int r = radius - static_cast<int>(i);
    const int q_min = std::max(-radius, -r - radius);
    const int q_max = std::min(radius, -r + radius);
    const auto expected = static_cast<std::size_t>(q_max - q_min + 1);
    if (rows[i].size() != expected) {
      throw Error(ErrorCode::parse_error, "core map row " + std::to_string(i) + " has " +
                                              std::to_string(rows[i].size()) +
                                              " entries, expected " + std::to_string(expected));
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      const int material = rows[i][j];
      if (material < 0) {
        throw Error(ErrorCode::parse_error, "negative material id in core map");
      }
      if (material == 0) continue;
      layout.cells.push_back({q_min + static_cast<int>(j), r, material});
    }
  }
  return layout;
}

std::vector<std::vector<int>> CoreLayout::to_rows() const {
  int radius = 0;
  for (const auto& c : cells) {
    radius = std::max({radius, std::abs(c.q), std::abs(c.r), std::abs(c.q + c.r)});
  }
  std::vector<std::vector<int>> rows;
  for (int r = radius; r >= -radius; --r) {
    const int q_min = std::max(-radius, -r - radius);
    const int q_max = std::min(radius, -r + radius);
    rows.emplace_back(static_cast<std::size_t>(q_max - q_min + 1), 0);
  }
  for (const auto& c : cells) {
    const int q_min = std::max(-radius, -c.r - radius);
    rows[static_cast<std::size_t>(radius - c.r)][static_cast<std::size_t>(c.q - q_min)] = c.material;
  }
  return rows;
}

double CoreLayout::hexagon_area() const noexcept {
  return std::sqrt(3.0) / 2.0 * pitch_cm * pitch_cm;
}

void CoreLayout::validate(const std::set<int>& known_materials) const {
  if (!(pitch_cm > 0.0) || !std::isfinite(pitch_cm)) {
    throw Error(ErrorCode::invalid_argument, "assembly pitch must be positive");
  }
  if (cells.empty()) {
    throw Error(ErrorCode::invalid_argument, "core layout has no cells");
  }
  std::map<std::pair<int, int>, std::size_t> index;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    if (!known_materials.contains(c.material)) {
      throw Error(ErrorCode::unknown_material,
                  "cell (" + std::to_string(c.q) + "," + std::to_string(c.r) +
                      ") references unknown material " + std::to_string(c.material));
    }
    if (!index.emplace(std::pair{c.q, c.r}, i).second) {
      throw Error(ErrorCode::invalid_argument, "duplicate lattice site in core layout");
    }
  }

  std::vector<bool> seen(cells.size(), false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const auto& c = cells[frontier.front()];
    frontier.pop();
    for (const auto& d : kHexNeighbors) {
      const auto it = index.find({c.q + d[0], c.r + d[1]});
      if (it != index.end() && !seen[it->second]) {
        seen[it->second] = true;
        ++reached;
        frontier.push(it->second);
      }
    }
  }
  if (reached != cells.size()) {
    throw Error(ErrorCode::disconnected_layout,
                "core layout is not edge-connected (" + std::to_string(reached) + " of " +
                    std::to_string(cells.size()) + " cells reachable)");
  }
}

}  // namespace sp3hex::geometry
