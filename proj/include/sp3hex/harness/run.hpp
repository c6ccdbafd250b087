#pragma once

#include "sp3hex/harness/benchmark.hpp"
#include "sp3hex/harness/records.hpp"
#include "sp3hex/neutronics/operators.hpp"
#include "sp3hex/spectral/driver.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sp3hex::harness {

enum class OutputFormat { csv, vtk, json };

/// Parses a comma separated list such as "csv,vtk,json".
[[nodiscard]] std::set<OutputFormat> parse_formats(std::string_view text);
[[nodiscard]] std::string formats_to_string(const std::set<OutputFormat>& formats);

struct RunConfig {
  /// Bundled id or path to a core file.
  std::string benchmark = "iaea2d-bare";
  neutronics::Model model = neutronics::Model::diffusion;
  spectral::ProblemKind problem = spectral::ProblemKind::lambda;
  int p = 2;
  int n = 24;
  int nev = 1;
  double tol = 1e-12;
  std::optional<double> shift;
  /// Empty means nothing is written.
  std::string out_dir;
  std::set<OutputFormat> formats = {OutputFormat::csv, OutputFormat::json};
  /// Assembly powers to compare against (power CSV); optional.
  std::string reference_power;

  /// Throws invalid-argument unless p in {1,2,3}, n in {6,24,96}, nev >= 1, tol > 0.
  void validate() const;
};

struct ResultRecord {
  RunConfig config;
  std::string benchmark_id;
  std::vector<EigenRow> eigenvalues;
  /// Fundamental-mode assembly powers.
  std::vector<PowerRow> power;
  /// Prompt generation time, filled for prompt alpha runs.
  std::optional<double> lambda_pr;
  /// k of the same discretization, filled for prompt alpha runs.
  std::optional<double> k_fundamental;
  /// Power deviation in percent from `reference_power`, when given.
  std::optional<double> delta;
  std::vector<double> shifts;
  double wall_seconds = 0.0;
  int scalar_dofs = 0;
  int unknowns = 0;
};

/// Everything a solve needs for one (benchmark, model, p, n).
struct PreparedCase {
  BenchmarkData data;
  neutronics::BlockOperators ops;
};

[[nodiscard]] PreparedCase prepare_case(const BenchmarkData& data, neutronics::Model model, int p, int n);

/// The spectral solution together with its record; vectors are kept for field export.
struct RunOutcome {
  ResultRecord record;
  spectral::SpectralSolution solution;
};

[[nodiscard]] RunOutcome solve_case(const PreparedCase& prepared, const RunConfig& config);

/// geometry -> operators -> solve -> postprocess, then writes the requested
/// outputs under config.out_dir. Errors carry the config in their message.
[[nodiscard]] ResultRecord run(const RunConfig& config, const std::filesystem::path& data_dir = default_data_dir());

/// Writes eigenvalues.csv, power.csv, mode_<i>.vtk and result.json as requested.
void write_outputs(const RunOutcome& outcome, const PreparedCase& prepared);

[[nodiscard]] std::vector<PowerRow> power_rows(const spectral::PowerDistribution& p,
                                               const neutronics::BlockOperators& ops);
/// Root mean square relative deviation over reference fuel assemblies, in percent.
/// Rows are matched by (q, r).
[[nodiscard]] double power_deviation(const std::vector<PowerRow>& power, const std::vector<PowerRow>& reference);

[[nodiscard]] std::string record_to_json(const ResultRecord& record);
[[nodiscard]] ResultRecord record_from_json(std::string_view text);

struct SweepConfig {
  RunConfig base;
  std::vector<int> ps = {1, 2, 3};
  std::vector<int> ns = {6, 24, 96};
  /// Cells solved at once.
  int workers = 1;
};

struct SweepCell {
  int n = 0;
  int p = 0;
  bool ok = false;
  std::string error;
  ResultRecord record;
  /// Fundamental value (k or alpha) and its deviation from the reference cell:
  /// pcm for k, absolute for alpha.
  double value = 0.0;
  double delta_value = 0.0;
  /// Power deviation from the reference cell, percent.
  double delta_power = 0.0;
  bool reference = false;
};

struct SweepTable {
  SweepConfig config;
  std::vector<SweepCell> cells;  // rows n, columns p

  [[nodiscard]] const SweepCell* find(int n, int p) const;
};

/// Runs every (n, p) cell; failed cells are marked and the sweep continues.
/// The cell with the largest p and then the largest n is the reference.
[[nodiscard]] SweepTable sweep(const SweepConfig& config, const std::filesystem::path& data_dir = default_data_dir());

void write_sweep_csv(std::ostream& out, const SweepTable& table);
[[nodiscard]] std::string format_sweep(const SweepTable& table);

}  // namespace sp3hex::harness
