#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sp3hex::neutronics {

/// Second-moment diffusion coefficient: 9/(7 Sigma_t) or 9/(35 Sigma_t).
enum class D2Convention { seven, thirty_five };

[[nodiscard]] D2Convention parse_d2_convention(std::string_view text);
[[nodiscard]] std::string_view to_string(D2Convention c) noexcept;

/// Material as read from a data file. Two forms are accepted:
/// absorption plus full scattering matrix (in-group included), or
/// removal plus out-of-group transfer.
struct RawMaterial {
  int id = 0;
  std::string name;
  std::vector<double> diffusion;
  std::optional<std::vector<double>> sigma_a;
  std::optional<std::vector<double>> sigma_r;
  std::optional<std::vector<double>> sigma_t;
  /// scatter[from][to]; diagonal entries only matter for the total check.
  std::optional<std::vector<std::vector<double>>> scatter;
  std::vector<double> nu_sigma_f;
  /// Empty selects (1, 0, ..., 0).
  std::vector<double> chi_n;
  std::vector<double> chi_d;
};

struct MaterialData {
  int id = 0;
  std::string name;
  int groups = 0;
  std::vector<double> diffusion;
  std::vector<double> sigma_a;  // empty when not given
  std::vector<double> sigma_t;
  std::vector<double> sigma_tr;
  std::vector<double> sigma_r;
  std::vector<double> nu_sigma_f;
  /// Out-of-group transfer, transfer[from][to], zero diagonal.
  std::vector<std::vector<double>> transfer;
  std::vector<double> chi_n;
  std::vector<double> chi_d;
  std::vector<double> d0;
  std::vector<double> d2;

  [[nodiscard]] bool fissile() const noexcept;
};

using MaterialTable = std::map<int, MaterialData>;

/// Fills removal, transport/total and the SP3 coefficients.
/// Throws invalid-argument for nonpositive D or missing fields.
[[nodiscard]] MaterialData derive_sp3_constants(const RawMaterial& raw,
                                                D2Convention convention = D2Convention::seven);

struct KineticsData {
  std::vector<double> beta;
  std::vector<double> decay;
  std::vector<double> velocity;

  [[nodiscard]] double total_beta() const noexcept;
  [[nodiscard]] int precursor_groups() const noexcept { return static_cast<int>(beta.size()); }
  /// Checks 0 < beta < 1, decay > 0, velocity > 0 and one speed per group.
  void validate(int groups) const;
};

/// Group count shared by all materials; throws when they disagree.
[[nodiscard]] int group_count(const MaterialTable& materials);

}  // namespace sp3hex::neutronics
