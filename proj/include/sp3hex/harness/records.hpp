#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sp3hex::harness {

/// One eigenpair summary. `value` is k for the lambda problem (k = 1 / lambda)
/// and equals the eigenvalue for alpha problems.
struct EigenRow {
  int index = 0;
  double re = 0.0;
  double im = 0.0;
  double value_re = 0.0;
  double value_im = 0.0;
  double residual = 0.0;
  bool converged = false;
  friend bool operator==(const EigenRow&, const EigenRow&) = default;
};

/// Normalized power of one assembly, keyed by its lattice coordinates.
struct PowerRow {
  int q = 0;
  int r = 0;
  int material = 0;
  bool fuel = false;
  double power = 0.0;
  friend bool operator==(const PowerRow&, const PowerRow&) = default;
};

// Floats are written with 17 significant digits so parsing restores them exactly.
void write_eigen_csv(std::ostream& out, const std::vector<EigenRow>& rows);
[[nodiscard]] std::vector<EigenRow> read_eigen_csv(std::istream& in);

void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows);
[[nodiscard]] std::vector<PowerRow> read_power_csv(std::istream& in);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

[[nodiscard]] std::string format_double(double x);

}  // namespace sp3hex::harness
