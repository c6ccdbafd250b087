#pragma once

#include "sp3hex/fem/sparse.hpp"

#include <iosfwd>
#include <string>

namespace sp3hex::linalg {

/// Matrix Market coordinate format, real general (symmetric files are expanded on read).
void write_matrix_market(std::ostream& out, const SparseMatrix& a);
void write_matrix_market(const std::string& path, const SparseMatrix& a);

[[nodiscard]] SparseMatrix read_matrix_market(std::istream& in);
[[nodiscard]] SparseMatrix read_matrix_market(const std::string& path);

}  // namespace sp3hex::linalg
