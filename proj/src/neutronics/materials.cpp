#include "sp3hex/neutronics/materials.hpp"

#include "sp3hex/error.hpp"

#include <cmath>
#include <numeric>

namespace sp3hex::neutronics {

namespace {

[[noreturn]] void fail(const RawMaterial& raw, const std::string& what) {
  throw Error(ErrorCode::invalid_argument, "material " + std::to_string(raw.id) + ": " + what);
}

void check_size(const RawMaterial& raw, const std::vector<double>& v, std::size_t groups, const char* name) {
  if (v.size() != groups) fail(raw, std::string(name) + " needs one value per group");
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) fail(raw, std::string(name) + " must be finite and nonnegative");
  }
}

std::vector<double> spectrum(const RawMaterial& raw, const std::vector<double>& given, std::size_t groups,
                             const char* name) {
  if (given.empty()) {
    std::vector<double> chi(groups, 0.0);
    chi[0] = 1.0;
    return chi;
  }
  check_size(raw, given, groups, name);
  const double sum = std::accumulate(given.begin(), given.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) fail(raw, std::string(name) + " must sum to 1");
  return given;
}

}  // namespace

D2Convention parse_d2_convention(std::string_view text) {
  if (text == "9/7" || text == "seven") return D2Convention::seven;
  if (text == "9/35" || text == "thirty-five") return D2Convention::thirty_five;
  throw Error(ErrorCode::invalid_argument, "unknown d2 convention '" + std::string(text) + "'");
}

std::string_view to_string(D2Convention c) noexcept { return c == D2Convention::seven ? "9/7" : "9/35"; }

bool MaterialData::fissile() const noexcept {
  for (double x : nu_sigma_f) {
    if (x > 0.0) return true;
  }
  return false;
}

MaterialData derive_sp3_constants(const RawMaterial& raw, D2Convention convention) {
  const std::size_t groups = raw.diffusion.size();
  if (groups == 0) fail(raw, "missing diffusion coefficients");
  for (double d : raw.diffusion) {
    if (!(d > 0.0) || !std::isfinite(d)) fail(raw, "diffusion coefficient must be positive");
  }

  MaterialData m;
  m.id = raw.id;
  m.name = raw.name;
  m.groups = static_cast<int>(groups);
  m.diffusion = raw.diffusion;

  m.transfer.assign(groups, std::vector<double>(groups, 0.0));
  if (raw.scatter) {
    if (raw.scatter->size() != groups) fail(raw, "scattering matrix must be G x G");
    for (std::size_t g = 0; g < groups; ++g) {
      check_size(raw, (*raw.scatter)[g], groups, "scattering row");
      for (std::size_t h = 0; h < groups; ++h) {
        if (h != g) m.transfer[g][h] = (*raw.scatter)[g][h];
      }
    }
  } else if (groups > 1) {
    fail(raw, "missing scattering transfer");
  }

  m.sigma_tr.resize(groups);
  for (std::size_t g = 0; g < groups; ++g) m.sigma_tr[g] = 1.0 / (3.0 * raw.diffusion[g]);

  if (raw.sigma_r) {
    check_size(raw, *raw.sigma_r, groups, "sigma_r");
    m.sigma_r = *raw.sigma_r;
  } else if (raw.sigma_a) {
    check_size(raw, *raw.sigma_a, groups, "sigma_a");
    m.sigma_r.resize(groups);
    for (std::size_t g = 0; g < groups; ++g) {
      m.sigma_r[g] = (*raw.sigma_a)[g] + std::accumulate(m.transfer[g].begin(), m.transfer[g].end(), 0.0);
    }
  } else {
    fail(raw, "either sigma_r or sigma_a is required");
  }
  if (raw.sigma_a) {
    check_size(raw, *raw.sigma_a, groups, "sigma_a");
    m.sigma_a = *raw.sigma_a;
  }

  // Absorption plus full scattering gives a total that must match 1/(3D).
  if (raw.sigma_a && raw.scatter) {
    for (std::size_t g = 0; g < groups; ++g) {
      const auto& row = (*raw.scatter)[g];
      const double total = (*raw.sigma_a)[g] + std::accumulate(row.begin(), row.end(), 0.0);
      if (row[g] > 0.0 && std::abs(total - m.sigma_tr[g]) > 1e-6 * m.sigma_tr[g]) {
        fail(raw, "absorption plus scattering does not reproduce 1/(3D) in group " + std::to_string(g + 1));
      }
    }
  }

  if (raw.sigma_t) {
    check_size(raw, *raw.sigma_t, groups, "sigma_t");
    m.sigma_t = *raw.sigma_t;
  } else {
    m.sigma_t = m.sigma_tr;
  }

  if (raw.nu_sigma_f.empty()) {
    m.nu_sigma_f.assign(groups, 0.0);
  } else {
    check_size(raw, raw.nu_sigma_f, groups, "nu_sigma_f");
    m.nu_sigma_f = raw.nu_sigma_f;
  }
  m.chi_n = spectrum(raw, raw.chi_n, groups, "chi_n");
  m.chi_d = spectrum(raw, raw.chi_d, groups, "chi_d");

  const double numerator = 9.0;
  const double denominator = convention == D2Convention::seven ? 7.0 : 35.0;
  m.d0 = m.diffusion;
  m.d2.resize(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    if (!(m.sigma_t[g] > 0.0)) fail(raw, "total cross section must be positive");
    m.d2[g] = numerator / (denominator * m.sigma_t[g]);
  }
  return m;
}

double KineticsData::total_beta() const noexcept { return std::accumulate(beta.begin(), beta.end(), 0.0); }

void KineticsData::validate(int groups) const {
  if (beta.size() != decay.size()) {
    throw Error(ErrorCode::invalid_argument, "kinetics: beta and lambda lengths differ");
  }
  for (double b : beta) {
    if (!(b >= 0.0)) throw Error(ErrorCode::invalid_argument, "kinetics: beta must be nonnegative");
  }
  const double total = total_beta();
  if (!beta.empty() && !(total > 0.0 && total < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "kinetics: total beta must lie in (0, 1)");
  }
  for (double l : decay) {
    if (!(l > 0.0)) throw Error(ErrorCode::invalid_argument, "kinetics: decay constants must be positive");
  }
  if (static_cast<int>(velocity.size()) != groups) {
    throw Error(ErrorCode::invalid_argument, "kinetics: need one velocity per group");
  }
  for (double v : velocity) {
    if (!(v > 0.0)) throw Error(ErrorCode::invalid_argument, "kinetics: velocities must be positive");
  }
}

int group_count(const MaterialTable& materials) {
  if (materials.empty()) throw Error(ErrorCode::invalid_argument, "empty material table");
  const int g = materials.begin()->second.groups;
  for (const auto& [id, m] : materials) {
    if (m.groups != g) {
      throw Error(ErrorCode::invalid_argument, "material " + std::to_string(id) + " has a different group count");
    }
  }
  return g;
}

}  // namespace sp3hex::neutronics
