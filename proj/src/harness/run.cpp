#include "sp3hex/harness/run.hpp"

#include "sp3hex/error.hpp"
#include "sp3hex/geometry/mesh.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace sp3hex::harness {

using nlohmann::json;
using spectral::Complex;
using spectral::ProblemKind;

namespace {

std::string describe(const RunConfig& c) {
  std::ostringstream s;
  s << "benchmark=" << c.benchmark << " model=" << neutronics::to_string(c.model)
    << " problem=" << spectral::to_string(c.problem) << " p=" << c.p << " n=" << c.n << " nev=" << c.nev;
  return s.str();
}

std::vector<EigenRow> eigen_rows(const spectral::SpectralSolution& s) {
  std::vector<EigenRow> rows;
  const auto values = s.reported();
  for (std::size_t i = 0; i < s.spectrum.eigenvalues.size(); ++i) {
    EigenRow r;
    r.index = static_cast<int>(i) + 1;
    r.re = s.spectrum.eigenvalues[i].real();
    r.im = s.spectrum.eigenvalues[i].imag();
    r.value_re = values[i].real();
    r.value_im = values[i].imag();
    r.residual = s.spectrum.residuals[i];
    r.converged = s.spectrum.converged[i];
    rows.push_back(r);
  }
  return rows;
}

json config_json(const RunConfig& c) {
  json j;
  j["benchmark"] = c.benchmark;
  j["model"] = std::string(neutronics::to_string(c.model));
  j["problem"] = std::string(spectral::to_string(c.problem));
  j["p"] = c.p;
  j["n"] = c.n;
  j["nev"] = c.nev;
  j["tol"] = c.tol;
  j["shift"] = c.shift ? json(*c.shift) : json(nullptr);
  j["out_dir"] = c.out_dir;
  j["formats"] = formats_to_string(c.formats);
  j["reference_power"] = c.reference_power;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.benchmark = j.at("benchmark").get<std::string>();
  c.model = neutronics::parse_model(j.at("model").get<std::string>());
  c.problem = spectral::parse_problem(j.at("problem").get<std::string>());
  c.p = j.at("p").get<int>();
  c.n = j.at("n").get<int>();
  c.nev = j.at("nev").get<int>();
  c.tol = j.at("tol").get<double>();
  if (!j.at("shift").is_null()) c.shift = j.at("shift").get<double>();
  c.out_dir = j.value("out_dir", std::string());
  c.formats = parse_formats(j.value("formats", std::string()));
  c.reference_power = j.value("reference_power", std::string());
  return c;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::vector<PowerRow> read_power_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open reference power '" + path + "'");
  return read_power_csv(in);
}

// Values of one (field, group) block at the mesh vertices; removed dofs read zero.
std::vector<double> vertex_values(const std::vector<Complex>& x, int offset, const std::vector<int>& dofs, int vertices,
                                  bool imag) {
  std::vector<double> v(static_cast<std::size_t>(vertices), 0.0);
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    const int d = dofs[i];
    if (d >= vertices) break;
    const Complex z = x[static_cast<std::size_t>(offset) + i];
    v[static_cast<std::size_t>(d)] = imag ? z.imag() : z.real();
  }
  return v;
}

std::vector<geometry::PointField> mode_fields(const std::vector<Complex>& x, const neutronics::BlockOperators& ops) {
  const auto& layout = ops.layout;
  const int nv = ops.space->vertex_count();
  std::vector<geometry::PointField> fields;
  for (int part = 0; part < 2; ++part) {
    const bool imag = part == 1;
    const char* suffix = imag ? "_im" : "_re";
    for (int g = 0; g < layout.groups; ++g) {
      const std::string gs = "_g" + std::to_string(g + 1);
      std::vector<double> phi(static_cast<std::size_t>(nv), 0.0);
      for (int f = 0; f < layout.fields; ++f) {
        auto v = vertex_values(x, layout.flux_offset(f, g), layout.flux_dofs, nv, imag);
        const double w = f == 0 ? 1.0 : -2.0;
        for (std::size_t i = 0; i < v.size(); ++i) phi[i] += w * v[i];
        if (layout.fields == 2) fields.push_back({(f == 0 ? "phi0" : "phi2") + gs + suffix, std::move(v)});
      }
      fields.push_back({"phi" + gs + suffix, std::move(phi)});
    }
    if (x.size() > static_cast<std::size_t>(layout.flux_size())) {
      const auto np = static_cast<int>(layout.precursor_dofs.size());
      for (int m = 0; m < layout.precursor_groups; ++m) {
        auto v = vertex_values(x, layout.flux_size() + m * np, layout.precursor_dofs, nv, imag);
        fields.push_back({"c" + std::to_string(m + 1) + suffix, std::move(v)});
      }
    }
  }
  return fields;
}

}  // namespace

std::set<OutputFormat> parse_formats(std::string_view text) {
  std::set<OutputFormat> out;
  std::string item;
  std::istringstream s{std::string(text)};
  while (std::getline(s, item, ',')) {
    if (item == "csv") out.insert(OutputFormat::csv);
    else if (item == "vtk") out.insert(OutputFormat::vtk);
    else if (item == "json") out.insert(OutputFormat::json);
    else if (!item.empty()) throw Error(ErrorCode::invalid_argument, "unknown output format '" + item + "'");
  }
  return out;
}

std::string formats_to_string(const std::set<OutputFormat>& formats) {
  std::string s;
  for (OutputFormat f : formats) {
    if (!s.empty()) s += ',';
    s += f == OutputFormat::csv ? "csv" : f == OutputFormat::vtk ? "vtk" : "json";
  }
  return s;
}

void RunConfig::validate() const {
  if (p < 1 || p > 3) throw Error(ErrorCode::invalid_argument, "p must be 1, 2 or 3");
  if (n != 6 && n != 24 && n != 96) throw Error(ErrorCode::invalid_argument, "n must be 6, 24 or 96");
  if (nev < 1) throw Error(ErrorCode::invalid_argument, "nev must be at least 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tol must be positive");
}

PreparedCase prepare_case(const BenchmarkData& data, neutronics::Model model, int p, int n) {
  auto mesh = std::make_shared<const geometry::Mesh>(geometry::build_core_mesh(data.layout, n));
  auto space = std::make_shared<const fem::FeSpace>(mesh, p);
  return {data, neutronics::build_operators(model, space, data.materials(), data.kinetics, data.layout.bc)};
}

std::vector<PowerRow> power_rows(const spectral::PowerDistribution& p, const neutronics::BlockOperators& ops) {
  const auto& assemblies = ops.space->mesh().assemblies;
  std::vector<PowerRow> rows;
  rows.reserve(assemblies.size());
  for (std::size_t a = 0; a < assemblies.size(); ++a) {
    rows.push_back({assemblies[a].q, assemblies[a].r, assemblies[a].material, static_cast<bool>(p.fuel[a]),
                    p.power[a]});
  }
  return rows;
}

double power_deviation(const std::vector<PowerRow>& power, const std::vector<PowerRow>& reference) {
  std::map<std::pair<int, int>, double> by_site;
  for (const auto& r : power) by_site[{r.q, r.r}] = r.power;
  double s = 0.0;
  int count = 0;
  for (const auto& ref : reference) {
    if (!ref.fuel) continue;
    const auto it = by_site.find({ref.q, ref.r});
    if (it == by_site.end()) {
      throw Error(ErrorCode::invalid_argument, "power deviation: assembly (" + std::to_string(ref.q) + ", " +
                                                   std::to_string(ref.r) + ") missing");
    }
    const double d = (it->second - ref.power) / ref.power;
    s += d * d;
    ++count;
  }
  return count > 0 ? 100.0 * std::sqrt(s / count) : 0.0;
}

RunOutcome solve_case(const PreparedCase& prepared, const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto& ops = prepared.ops;

  spectral::ProblemSpec spec;
  spec.kind = config.problem;
  spec.nev = config.nev;
  spec.tol = config.tol;
  spec.shift = config.shift;

  RunOutcome out;
  out.solution = spectral::solve(ops, spec);
  ResultRecord& rec = out.record;
  rec.config = config;
  rec.benchmark_id = prepared.data.id;
  rec.eigenvalues = eigen_rows(out.solution);
  rec.shifts = out.solution.shifts;
  rec.scalar_dofs = ops.layout.scalar_dofs;
  rec.unknowns = ops.layout.flux_size() + (config.problem == ProblemKind::alpha_delayed ? ops.layout.precursor_size() : 0);
  if (!out.solution.spectrum.eigenvectors.empty()) {
    rec.power = power_rows(spectral::compute_power(out.solution.spectrum.eigenvectors.front(), ops), ops);
  }
  if (config.problem == ProblemKind::alpha_prompt && !rec.eigenvalues.empty()) {
    spectral::ProblemSpec kspec;
    kspec.tol = config.tol;
    const auto ks = spectral::solve_lambda(ops, kspec);
    rec.k_fundamental = ks.k.front().real();
    try {
      rec.lambda_pr = spectral::inhour_lambda_pr(*rec.k_fundamental, rec.eigenvalues.front().re);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::critical_limit) throw;
    }
  }
  if (!config.reference_power.empty() && !rec.power.empty()) {
    rec.delta = power_deviation(rec.power, read_power_file(config.reference_power));
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_outputs(const RunOutcome& outcome, const PreparedCase& prepared) {
  const RunConfig& c = outcome.record.config;
  if (c.out_dir.empty()) return;
  const std::filesystem::path dir(c.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create '" + dir.string() + "': " + ec.message());

  if (c.formats.count(OutputFormat::csv)) {
    std::ostringstream e;
    write_eigen_csv(e, outcome.record.eigenvalues);
    write_file_atomic((dir / "eigenvalues.csv").string(), e.str());
    std::ostringstream p;
    write_power_csv(p, outcome.record.power);
    write_file_atomic((dir / "power.csv").string(), p.str());
  }
  if (c.formats.count(OutputFormat::vtk)) {
    const auto& vectors = outcome.solution.spectrum.eigenvectors;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      const auto fields = mode_fields(vectors[i], prepared.ops);
      std::ostringstream s;
      geometry::write_vtk(s, prepared.ops.space->mesh(), fields);
      std::ostringstream name;
      name << "mode_" << std::setw(2) << std::setfill('0') << i + 1 << ".vtk";
      write_file_atomic((dir / name.str()).string(), s.str());
    }
  }
  if (c.formats.count(OutputFormat::json)) {
    write_file_atomic((dir / "result.json").string(), record_to_json(outcome.record) + "\n");
  }
}

ResultRecord run(const RunConfig& config, const std::filesystem::path& data_dir) {
  try {
    config.validate();
    const BenchmarkData data = load_benchmark(config.benchmark, data_dir);
    const auto start = std::chrono::steady_clock::now();
    const PreparedCase prepared = prepare_case(data, config.model, config.p, config.n);
    RunOutcome out = solve_case(prepared, config);
    out.record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_outputs(out, prepared);
    return out.record;
  } catch (const Error& e) {
    throw Error(e.code(), describe(config) + ": " + e.what());
  }
}

std::string record_to_json(const ResultRecord& r) {
  json j;
  j["config"] = config_json(r.config);
  j["benchmark_id"] = r.benchmark_id;
  j["eigenvalues"] = json::array();
  for (const auto& e : r.eigenvalues) {
    j["eigenvalues"].push_back({{"index", e.index},
                                {"re", e.re},
                                {"im", e.im},
                                {"value_re", e.value_re},
                                {"value_im", e.value_im},
                                {"residual", e.residual},
                                {"converged", e.converged}});
  }
  j["power"] = json::array();
  for (const auto& p : r.power) {
    j["power"].push_back({{"q", p.q}, {"r", p.r}, {"material", p.material}, {"fuel", p.fuel}, {"power", p.power}});
  }
  j["lambda_pr"] = optional_json(r.lambda_pr);
  j["k_fundamental"] = optional_json(r.k_fundamental);
  j["delta"] = optional_json(r.delta);
  j["shifts"] = r.shifts;
  j["wall_seconds"] = r.wall_seconds;
  j["scalar_dofs"] = r.scalar_dofs;
  j["unknowns"] = r.unknowns;
  return j.dump(2);
}

ResultRecord record_from_json(std::string_view text) {
  ResultRecord r;
  try {
    const json j = json::parse(text.begin(), text.end());
    r.config = config_from_json(j.at("config"));
    r.benchmark_id = j.at("benchmark_id").get<std::string>();
    for (const auto& e : j.at("eigenvalues")) {
      r.eigenvalues.push_back({e.at("index").get<int>(), e.at("re").get<double>(), e.at("im").get<double>(),
                               e.at("value_re").get<double>(), e.at("value_im").get<double>(),
                               e.at("residual").get<double>(), e.at("converged").get<bool>()});
    }
    for (const auto& p : j.at("power")) {
      r.power.push_back({p.at("q").get<int>(), p.at("r").get<int>(), p.at("material").get<int>(),
                         p.at("fuel").get<bool>(), p.at("power").get<double>()});
    }
    r.lambda_pr = optional_from(j, "lambda_pr");
    r.k_fundamental = optional_from(j, "k_fundamental");
    r.delta = optional_from(j, "delta");
    r.shifts = j.at("shifts").get<std::vector<double>>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.scalar_dofs = j.at("scalar_dofs").get<int>();
    r.unknowns = j.at("unknowns").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("result record: ") + e.what());
  }
  return r;
}

const SweepCell* SweepTable::find(int n, int p) const {
  for (const auto& c : cells) {
    if (c.n == n && c.p == p) return &c;
  }
  return nullptr;
}

SweepTable sweep(const SweepConfig& config, const std::filesystem::path& data_dir) {
  if (config.ps.empty() || config.ns.empty()) throw Error(ErrorCode::invalid_argument, "sweep: empty p or n list");
  const BenchmarkData data = load_benchmark(config.base.benchmark, data_dir);

  SweepTable table;
  table.config = config;
  for (int n : config.ns) {
    for (int p : config.ps) {
      SweepCell c;
      c.n = n;
      c.p = p;
      table.cells.push_back(c);
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < table.cells.size(); i = next++) {
      SweepCell& cell = table.cells[i];
      RunConfig rc = config.base;
      rc.p = cell.p;
      rc.n = cell.n;
      if (!config.base.out_dir.empty()) {
        rc.out_dir = (std::filesystem::path(config.base.out_dir) /
                      ("p" + std::to_string(cell.p) + "_n" + std::to_string(cell.n)))
                         .string();
      }
      try {
        rc.validate();
        const PreparedCase prepared = prepare_case(data, rc.model, rc.p, rc.n);
        RunOutcome out = solve_case(prepared, rc);
        write_outputs(out, prepared);
        cell.record = std::move(out.record);
        cell.ok = !cell.record.eigenvalues.empty();
        if (!cell.ok) cell.error = "no eigenvalues";
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = describe(rc) + ": " + e.what();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(config.workers, static_cast<int>(table.cells.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepCell* ref = nullptr;
  for (auto& c : table.cells) {
    if (!c.ok) continue;
    c.value = c.record.eigenvalues.front().value_re;
    if (ref == nullptr || c.p > ref->p || (c.p == ref->p && c.n > ref->n)) ref = &c;
  }
  if (ref != nullptr) {
    ref->reference = true;
    const double scale = config.base.problem == ProblemKind::lambda ? 1e5 : 1.0;
    for (auto& c : table.cells) {
      if (!c.ok) continue;
      c.delta_value = std::abs(c.value - ref->value) * scale;
      c.delta_power = power_deviation(c.record.power, ref->record.power);
    }
  }
  return table;
}

void write_sweep_csv(std::ostream& out, const SweepTable& t) {
  out << "n,p,ok,value,delta_value,delta_power,reference,scalar_dofs,wall_seconds,error\n";
  for (const auto& c : t.cells) {
    std::string err = c.error;
    for (char& ch : err) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    out << c.n << ',' << c.p << ',' << (c.ok ? 1 : 0) << ',' << format_double(c.value) << ','
        << format_double(c.delta_value) << ',' << format_double(c.delta_power) << ',' << (c.reference ? 1 : 0) << ','
        << c.record.scalar_dofs << ',' << format_double(c.record.wall_seconds) << ',' << err << '\n';
  }
}

std::string format_sweep(const SweepTable& t) {
  const bool lambda = t.config.base.problem == ProblemKind::lambda;
  std::ostringstream s;
  s << "  n  p  " << std::setw(12) << (lambda ? "k" : "alpha") << "  " << std::setw(10)
    << (lambda ? "Delta,pcm" : "Delta") << "  " << std::setw(8) << "delta,%" << '\n';
  for (const auto& c : t.cells) {
    s << std::setw(3) << c.n << std::setw(3) << c.p << "  ";
    if (!c.ok) {
      s << "FAILED " << c.error << '\n';
      continue;
    }
    s << std::setw(12) << std::setprecision(lambda ? 5 : 5) << std::fixed << c.value << "  " << std::setw(10)
      << std::setprecision(lambda ? 0 : 5) << c.delta_value << "  " << std::setw(8) << std::setprecision(2)
      << c.delta_power << (c.reference ? "  (reference)" : "") << '\n';
    s.unsetf(std::ios::floatfield);
  }
  return s.str();
}

}  // namespace sp3hex::harness
