// Serial reference against OpenMP for assembly and SpMV.
#include "sp3hex/fem/assembly.hpp"
#include "sp3hex/geometry/mesh.hpp"
#include "sp3hex/neutronics/operators.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <algorithm>
#include <complex>
#include <map>
#include <memory>

using namespace sp3hex;

namespace {

neutronics::RawMaterial iaea(int id, double sa2, double s22, double nsf2) {
  neutronics::RawMaterial r;
  r.id = id;
  r.diffusion = {1.5, 0.4};
  r.sigma_a = std::vector<double>{0.01, sa2};
  r.scatter = std::vector<std::vector<double>>{{0.1922222, 0.02}, {0.0, s22}};
  r.nu_sigma_f = {0.0, nsf2};
  return r;
}

// Radius-6 hexagon of assemblies: rodded centre, fuel, fuel-2 rim.
std::shared_ptr<const fem::FeSpace> space_for(int p, int n) {
  static std::map<std::pair<int, int>, std::shared_ptr<const fem::FeSpace>> cache;
  auto& s = cache[{p, n}];
  if (s) return s;
  geometry::CoreLayout layout{20.0, {}, geometry::BoundaryKind::marshak};
  const int radius = 6;
  for (int q = -radius; q <= radius; ++q) {
    for (int r = std::max(-radius, -q - radius); r <= std::min(radius, -q + radius); ++r) {
      const int ring = std::max({std::abs(q), std::abs(r), std::abs(q + r)});
      layout.cells.push_back({q, r, ring == 0 || ring == 3 ? 3 : ring == radius ? 2 : 1});
    }
  }
  auto mesh = std::make_shared<const geometry::Mesh>(geometry::build_core_mesh(layout, n));
  s = std::make_shared<const fem::FeSpace>(mesh, p);
  return s;
}

neutronics::MaterialTable table() {
  neutronics::MaterialTable t;
  for (const auto& r : {iaea(1, 0.08, 0.7533333, 0.135), iaea(2, 0.085, 0.7483333, 0.135),
                        iaea(3, 0.13, 0.7033333, 0.135)}) {
    t.emplace(r.id, neutronics::derive_sp3_constants(r));
  }
  return t;
}

Execution exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state, std::size_t dofs) {
  state.SetLabel(std::string(state.range(1) == 0 ? "serial" : "openmp") + " threads=" +
                 std::to_string(state.range(1) == 0 ? 1 : omp_get_max_threads()) + " dofs=" + std::to_string(dofs));
}

void BM_AssembleStiffness(benchmark::State& state) {
  const auto space = space_for(static_cast<int>(state.range(0)), 24);
  const fem::MaterialCoefficients d = {{1, 1.5}, {2, 1.5}, {3, 1.5}};
  for (auto _ : state) benchmark::DoNotOptimize(fem::assemble_stiffness(*space, d, exec_of(state)));
  label(state, static_cast<std::size_t>(space->dof_count()));
}

void BM_AssembleMass(benchmark::State& state) {
  const auto space = space_for(static_cast<int>(state.range(0)), 24);
  const fem::MaterialCoefficients c = {{1, 0.03}, {2, 0.03}, {3, 0.03}};
  for (auto _ : state) benchmark::DoNotOptimize(fem::assemble_mass(*space, c, exec_of(state)));
  label(state, static_cast<std::size_t>(space->dof_count()));
}

void BM_BuildSp3Operators(benchmark::State& state) {
  const auto space = space_for(static_cast<int>(state.range(0)), 24);
  const auto t = table();
  const neutronics::KineticsData kin{{6.5e-3}, {0.08}, {1.25e7, 2.5e5}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        neutronics::build_sp3_operators(space, t, kin, geometry::BoundaryKind::marshak, exec_of(state)));
  }
  label(state, static_cast<std::size_t>(space->dof_count()));
}

void BM_SpmvReal(benchmark::State& state) {
  const auto space = space_for(static_cast<int>(state.range(0)), 24);
  const auto ops = neutronics::build_sp3_operators(space, table(), {{6.5e-3}, {0.08}, {1.25e7, 2.5e5}});
  std::vector<double> x(static_cast<std::size_t>(ops.L.cols), 1.0), y(static_cast<std::size_t>(ops.L.rows));
  for (auto _ : state) {
    spmv(ops.L, x, y, exec_of(state));
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ops.L.values.size()));
  label(state, x.size());
}

void BM_SpmvComplex(benchmark::State& state) {
  const auto space = space_for(static_cast<int>(state.range(0)), 24);
  const auto ops = neutronics::build_sp3_operators(space, table(), {{6.5e-3}, {0.08}, {1.25e7, 2.5e5}});
  std::vector<std::complex<double>> x(static_cast<std::size_t>(ops.L.cols), {1.0, -0.5});
  std::vector<std::complex<double>> y(static_cast<std::size_t>(ops.L.rows));
  for (auto _ : state) {
    spmv(ops.L, x, y, exec_of(state));
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ops.L.values.size()));
  label(state, x.size());
}

// Args: {degree, 0 = serial / 1 = OpenMP}.
void grid(benchmark::internal::Benchmark* b) {
  for (int p = 1; p <= 3; ++p) {
    b->Args({p, 0});
    b->Args({p, 1});
  }
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_AssembleStiffness)->Apply(grid);
BENCHMARK(BM_AssembleMass)->Apply(grid);
BENCHMARK(BM_BuildSp3Operators)->Apply(grid);
BENCHMARK(BM_SpmvReal)->Apply(grid);
BENCHMARK(BM_SpmvComplex)->Apply(grid);

BENCHMARK_MAIN();
