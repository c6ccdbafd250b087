// sp3hex command line: run, sweep, mesh.
#include "sp3hex/error.hpp"
#include "sp3hex/geometry/mesh.hpp"
#include "sp3hex/harness/run.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

using namespace sp3hex;

namespace {

int report_error(std::string_view code, const std::string& message, int status) {
  nlohmann::json j;
  j["error"] = {{"code", std::string(code)}, {"message", message}};
  std::cerr << j.dump() << std::endl;
  return status;
}

void print_record(const harness::ResultRecord& r) {
  const bool lambda = r.config.problem == spectral::ProblemKind::lambda;
  std::printf("%s %s %s p=%d n=%d  dofs=%d unknowns=%d  %.2f s\n", r.benchmark_id.c_str(),
              std::string(neutronics::to_string(r.config.model)).c_str(),
              std::string(spectral::to_string(r.config.problem)).c_str(), r.config.p, r.config.n, r.scalar_dofs,
              r.unknowns, r.wall_seconds);
  std::printf("%4s %22s %22s %10s\n", "i", lambda ? "k.re" : "alpha.re", lambda ? "k.im" : "alpha.im", "residual");
  for (const auto& e : r.eigenvalues) {
    std::printf("%4d %22.12g %22.12g %10.2e%s\n", e.index, e.value_re, e.value_im, e.residual,
                e.converged ? "" : "  (not converged)");
  }
  if (r.k_fundamental) std::printf("k = %.8f\n", *r.k_fundamental);
  if (r.lambda_pr) std::printf("Lambda_pr = %.6e s\n", *r.lambda_pr);
  if (r.delta) std::printf("delta = %.4f %%\n", *r.delta);
}

struct CommonOptions {
  std::string benchmark = "iaea2d-bare";
  std::string model = "diffusion";
  std::string problem = "lambda";
  int nev = 1;
  double tol = 1e-12;
  std::optional<double> shift;
  std::string out;
  std::string formats = "csv,json";
  std::string data_dir;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--benchmark", o.benchmark, "iaea2d-bare | iaea2d-refl | iaea2d-perturbed | hwr | core file")
      ->capture_default_str();
  cmd->add_option("--model", o.model, "diffusion | sp3")->capture_default_str();
  cmd->add_option("--problem", o.problem, "lambda | alpha | alpha-delayed")->capture_default_str();
  cmd->add_option("--nev", o.nev, "eigenpairs")->capture_default_str();
  cmd->add_option("--tol", o.tol, "relative residual tolerance")->capture_default_str();
  cmd->add_option("--shift", o.shift, "single shift, overrides the default strategy");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--formats", o.formats, "csv,vtk,json")->capture_default_str();
  cmd->add_option("--data-dir", o.data_dir, "bundled data directory");
}

harness::RunConfig to_config(const CommonOptions& o) {
  harness::RunConfig c;
  c.benchmark = o.benchmark;
  c.model = neutronics::parse_model(o.model);
  c.problem = spectral::parse_problem(o.problem);
  c.nev = o.nev;
  c.tol = o.tol;
  c.shift = o.shift;
  c.out_dir = o.out;
  c.formats = harness::parse_formats(o.formats);
  return c;
}

std::filesystem::path data_dir(const CommonOptions& o) {
  return o.data_dir.empty() ? harness::default_data_dir() : std::filesystem::path(o.data_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FEM diffusion and SP3 spectral solver for hexagonal cores"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  int run_p = 2;
  int run_n = 24;
  std::string reference;
  auto* run_cmd = app.add_subcommand("run", "solve one configuration");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--p", run_p, "polynomial degree 1..3")->capture_default_str();
  run_cmd->add_option("--n", run_n, "triangles per assembly: 6, 24, 96")->capture_default_str();
  run_cmd->add_option("--reference-power", reference, "power CSV for the delta statistic");

  CommonOptions sweep_opts;
  std::vector<int> sweep_p = {1, 2, 3};
  std::vector<int> sweep_n = {6, 24, 96};
  int workers = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "convergence table over p and n");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--p", sweep_p, "degrees")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--n", sweep_n, "triangles per assembly")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--workers", workers, "cells solved concurrently")->capture_default_str();

  std::string mesh_benchmark = "iaea2d-bare";
  int mesh_n = 6;
  std::string mesh_out = "mesh.vtk";
  std::string mesh_data;
  auto* mesh_cmd = app.add_subcommand("mesh", "export the core triangulation as VTK");
  mesh_cmd->add_option("--benchmark", mesh_benchmark, "bundled id or core file")->capture_default_str();
  mesh_cmd->add_option("--n", mesh_n, "triangles per assembly")->capture_default_str();
  mesh_cmd->add_option("--out", mesh_out, "VTK file")->capture_default_str();
  mesh_cmd->add_option("--data-dir", mesh_data, "bundled data directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 64);
  }

  try {
    if (*run_cmd) {
      harness::RunConfig c = to_config(run_opts);
      c.p = run_p;
      c.n = run_n;
      c.reference_power = reference;
      print_record(harness::run(c, data_dir(run_opts)));
    } else if (*sweep_cmd) {
      harness::SweepConfig s;
      s.base = to_config(sweep_opts);
      s.ps = sweep_p;
      s.ns = sweep_n;
      s.workers = workers;
      const auto table = harness::sweep(s, data_dir(sweep_opts));
      std::cout << harness::format_sweep(table);
      if (!s.base.out_dir.empty()) {
        std::filesystem::create_directories(s.base.out_dir);
        std::ostringstream csv;
        harness::write_sweep_csv(csv, table);
        harness::write_file_atomic((std::filesystem::path(s.base.out_dir) / "sweep.csv").string(), csv.str());
      }
      for (const auto& cell : table.cells) {
        if (!cell.ok) return report_error("sweep-cell-failed", cell.error, 3);
      }
    } else if (*mesh_cmd) {
      const auto dir = mesh_data.empty() ? harness::default_data_dir() : std::filesystem::path(mesh_data);
      const auto data = harness::load_benchmark(mesh_benchmark, dir);
      geometry::write_vtk(mesh_out, geometry::build_core_mesh(data.layout, mesh_n));
      std::printf("%s: %zu assemblies, n=%d, written to %s\n", data.id.c_str(), data.layout.assembly_count(), mesh_n,
                  mesh_out.c_str());
    }
  } catch (const Error& e) {
    return report_error(to_string(e.code()), e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
  return 0;
}
