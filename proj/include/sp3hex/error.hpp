#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sp3hex {

enum class ErrorCode {
  invalid_argument,
  unknown_material,
  disconnected_layout,
  invalid_refinement,
  missing_coefficient,
  point_outside_mesh,
  singular_matrix,
  no_convergence,
  no_fission,
  critical_limit,
  inhour_pole,
  io_error,
  parse_error,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::unknown_material: return "unknown-material";
    case ErrorCode::disconnected_layout: return "disconnected-layout";
    case ErrorCode::invalid_refinement: return "invalid-refinement";
    case ErrorCode::missing_coefficient: return "missing-coefficient";
    case ErrorCode::point_outside_mesh: return "point-outside-mesh";
    case ErrorCode::singular_matrix: return "singular-matrix";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::no_fission: return "no-fission";
    case ErrorCode::critical_limit: return "critical-limit";
    case ErrorCode::inhour_pole: return "inhour-pole";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::parse_error: return "parse-error";
  }
  return "unknown";
}

/// Library-wide exception; `code()` is stable and machine readable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sp3hex
