#include "sp3hex/harness/benchmark.hpp"

#include "sp3hex/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#ifndef SP3HEX_DATA_DIR
#define SP3HEX_DATA_DIR "data"
#endif

namespace sp3hex::harness {

using nlohmann::json;

namespace {

[[noreturn]] void fail(std::string_view origin, const std::string& what) {
  throw Error(ErrorCode::parse_error, std::string(origin) + ": " + what);
}

std::vector<double> numbers(const json& j, std::string_view origin, const std::string& key) {
  if (!j.is_array()) fail(origin, key + " must be an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) fail(origin, key + " must be an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

std::optional<std::vector<double>> optional_numbers(const json& obj, std::string_view origin, const std::string& key) {
  if (!obj.contains(key)) return std::nullopt;
  return numbers(obj.at(key), origin, key);
}

neutronics::RawMaterial parse_material(const json& j, std::string_view origin) {
  if (!j.is_object()) fail(origin, "cross_sections entries must be objects");
  if (!j.contains("id") || !j.at("id").is_number_integer()) fail(origin, "cross section without integer id");
  neutronics::RawMaterial m;
  m.id = j.at("id").get<int>();
  const std::string where = "material " + std::to_string(m.id);
  if (!j.contains("diffusion")) fail(origin, where + " has no diffusion coefficients");
  m.diffusion = numbers(j.at("diffusion"), origin, "diffusion");
  m.sigma_a = optional_numbers(j, origin, "sigma_a");
  m.sigma_r = optional_numbers(j, origin, "sigma_r");
  m.sigma_t = optional_numbers(j, origin, "sigma_t");
  if (j.contains("scatter")) {
    const json& s = j.at("scatter");
    if (!s.is_array()) fail(origin, where + ": scatter must be a matrix");
    std::vector<std::vector<double>> rows;
    for (const auto& row : s) rows.push_back(numbers(row, origin, "scatter"));
    m.scatter = rows;
  }
  m.nu_sigma_f = j.contains("nu_sigma_f") ? numbers(j.at("nu_sigma_f"), origin, "nu_sigma_f")
                                          : std::vector<double>(m.diffusion.size(), 0.0);
  if (j.contains("chi_n")) m.chi_n = numbers(j.at("chi_n"), origin, "chi_n");
  if (j.contains("chi_d")) m.chi_d = numbers(j.at("chi_d"), origin, "chi_d");
  return m;
}

json material_json(const neutronics::RawMaterial& m) {
  json j;
  j["id"] = m.id;
  j["diffusion"] = m.diffusion;
  if (m.sigma_a) j["sigma_a"] = *m.sigma_a;
  if (m.sigma_r) j["sigma_r"] = *m.sigma_r;
  if (m.sigma_t) j["sigma_t"] = *m.sigma_t;
  if (m.scatter) j["scatter"] = *m.scatter;
  j["nu_sigma_f"] = m.nu_sigma_f;
  if (!m.chi_n.empty()) j["chi_n"] = m.chi_n;
  if (!m.chi_d.empty()) j["chi_d"] = m.chi_d;
  return j;
}

}  // namespace

neutronics::MaterialTable BenchmarkData::materials() const {
  neutronics::MaterialTable table;
  for (const auto& raw : raw_materials) table.emplace(raw.id, neutronics::derive_sp3_constants(raw, d2));
  (void)neutronics::group_count(table);
  return table;
}

BenchmarkData parse_benchmark(std::string_view text, std::string_view origin) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail(origin, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be an object");
  for (const char* key : {"pitch_cm", "rows", "cross_sections"}) {
    if (!j.contains(key)) fail(origin, std::string("missing field '") + key + "'");
  }

  BenchmarkData d;
  d.id = j.value("id", std::string());
  d.description = j.value("description", std::string());
  if (!j.at("pitch_cm").is_number()) fail(origin, "pitch_cm must be a number");
  const double pitch = j.at("pitch_cm").get<double>();
  const auto bc = geometry::parse_boundary_kind(j.value("bc", std::string("marshak")));
  if (j.contains("d2")) d.d2 = neutronics::parse_d2_convention(j.at("d2").get<std::string>());

  std::vector<std::vector<int>> rows;
  if (!j.at("rows").is_array()) fail(origin, "rows must be an array of arrays");
  for (const auto& row : j.at("rows")) {
    if (!row.is_array()) fail(origin, "rows must be an array of arrays");
    std::vector<int> r;
    for (const auto& x : row) {
      if (!x.is_number_integer()) fail(origin, "core map entries must be integers");
      r.push_back(x.get<int>());
    }
    rows.push_back(std::move(r));
  }
  d.layout = geometry::CoreLayout::from_rows(pitch, rows, bc);

  if (j.contains("materials")) {
    if (!j.at("materials").is_object()) fail(origin, "materials must map names to ids");
    for (const auto& [name, id] : j.at("materials").items()) {
      if (!id.is_number_integer()) fail(origin, "material '" + name + "' needs an integer id");
      d.material_names[name] = id.get<int>();
    }
  }

  std::set<int> ids;
  for (const auto& m : j.at("cross_sections")) {
    d.raw_materials.push_back(parse_material(m, origin));
    if (!ids.insert(d.raw_materials.back().id).second) {
      fail(origin, "duplicate cross sections for material " + std::to_string(d.raw_materials.back().id));
    }
  }
  for (auto& raw : d.raw_materials) {
    for (const auto& [name, id] : d.material_names) {
      if (id == raw.id) raw.name = name;
    }
  }
  for (const auto& [name, id] : d.material_names) {
    if (!ids.count(id)) fail(origin, "material '" + name + "' has no cross sections");
  }

  if (j.contains("kinetics")) {
    const json& k = j.at("kinetics");
    d.kinetics.beta = numbers(k.value("beta", json::array()), origin, "beta");
    d.kinetics.decay = numbers(k.value("decay", json::array()), origin, "decay");
    d.kinetics.velocity = numbers(k.value("velocity", json::array()), origin, "velocity");
  }

  try {
    d.layout.validate(ids);
  } catch (const Error& e) {
    throw Error(e.code(), std::string(origin) + ": " + e.what());
  }
  const int groups = neutronics::group_count(d.materials());
  if (!d.kinetics.velocity.empty() || !d.kinetics.beta.empty()) d.kinetics.validate(groups);
  return d;
}

std::string benchmark_to_json(const BenchmarkData& d) {
  json j;
  j["id"] = d.id;
  j["description"] = d.description;
  j["pitch_cm"] = d.layout.pitch_cm;
  j["bc"] = std::string(geometry::to_string(d.layout.bc));
  j["d2"] = std::string(neutronics::to_string(d.d2));
  j["materials"] = d.material_names;
  j["rows"] = d.layout.to_rows();
  j["cross_sections"] = json::array();
  for (const auto& m : d.raw_materials) j["cross_sections"].push_back(material_json(m));
  j["kinetics"] = {{"beta", d.kinetics.beta}, {"decay", d.kinetics.decay}, {"velocity", d.kinetics.velocity}};
  return j.dump(2);
}

BenchmarkData load_benchmark_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open core file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  BenchmarkData d = parse_benchmark(text.str(), path.string());
  if (d.id.empty()) d.id = path.stem().string();
  return d;
}

BenchmarkData load_benchmark(std::string_view id_or_path, const std::filesystem::path& data_dir) {
  const bool bundled = std::find(kBenchmarkIds.begin(), kBenchmarkIds.end(), id_or_path) != kBenchmarkIds.end();
  if (bundled) return load_benchmark_file(data_dir / "benchmarks" / (std::string(id_or_path) + ".json"));
  return load_benchmark_file(std::filesystem::path(std::string(id_or_path)));
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("SP3HEX_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return SP3HEX_DATA_DIR;
}

}  // namespace sp3hex::harness
