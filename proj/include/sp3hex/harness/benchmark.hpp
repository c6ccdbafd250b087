#pragma once

#include "sp3hex/geometry/core_layout.hpp"
#include "sp3hex/neutronics/materials.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sp3hex::harness {

/// A core definition as shipped in data/benchmarks/<id>.json.
struct BenchmarkData {
  std::string id;
  std::string description;
  geometry::CoreLayout layout;
  /// Display name -> material id.
  std::map<std::string, int> material_names;
  std::vector<neutronics::RawMaterial> raw_materials;
  neutronics::D2Convention d2 = neutronics::D2Convention::seven;
  neutronics::KineticsData kinetics;

  [[nodiscard]] neutronics::MaterialTable materials() const;
};

inline constexpr std::array<std::string_view, 4> kBenchmarkIds = {"iaea2d-bare", "iaea2d-refl", "iaea2d-perturbed",
                                                                  "hwr"};

/// Parses the JSON text of a core file. `origin` only decorates error messages.
[[nodiscard]] BenchmarkData parse_benchmark(std::string_view text, std::string_view origin = "<memory>");
[[nodiscard]] std::string benchmark_to_json(const BenchmarkData& data);

[[nodiscard]] BenchmarkData load_benchmark_file(const std::filesystem::path& path);

/// A bundled id resolves to <data_dir>/benchmarks/<id>.json; anything else is
/// treated as a path.
[[nodiscard]] BenchmarkData load_benchmark(std::string_view id_or_path, const std::filesystem::path& data_dir);

/// $SP3HEX_DATA_DIR if set, else the directory configured at build time.
[[nodiscard]] std::filesystem::path default_data_dir();

}  // namespace sp3hex::harness
