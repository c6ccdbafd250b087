#include "sp3hex/linalg/matrix_market.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sp3hex::linalg {

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows << ' ' << a.cols << ' ' << a.nnz() << '\n';
  char buf[40];
  for (int i = 0; i < a.rows; ++i) {
    for (int k = a.row_ptr[static_cast<std::size_t>(i)]; k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", a.values[static_cast<std::size_t>(k)]);
      out << i + 1 << ' ' << a.col_idx[static_cast<std::size_t>(k)] + 1 << ' ' << buf << '\n';
    }
  }
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  write_matrix_market(out, a);
  if (!out) throw Error(ErrorCode::io_error, "failed writing '" + path + "'");
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::parse_error, "empty Matrix Market stream");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  for (auto* s : {&object, &format, &field, &symmetry}) {
    for (auto& c : *s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (tag != "%%MatrixMarket" || object != "matrix" || format != "coordinate") {
    throw Error(ErrorCode::parse_error, "unsupported Matrix Market header: " + line);
  }
  if (field != "real" && field != "integer" && field != "pattern") {
    throw Error(ErrorCode::parse_error, "unsupported Matrix Market field '" + field + "'");
  }
  const bool symmetric = symmetry == "symmetric";
  const bool skew = symmetry == "skew-symmetric";
  if (!symmetric && !skew && symmetry != "general") {
    throw Error(ErrorCode::parse_error, "unsupported Matrix Market symmetry '" + symmetry + "'");
  }
  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  std::istringstream size_line(line);
  long long rows = 0, cols = 0, entries = 0;
  if (!(size_line >> rows >> cols >> entries) || rows < 0 || cols < 0 || entries < 0) {
    throw Error(ErrorCode::parse_error, "bad Matrix Market size line: " + line);
  }
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(entries) * (symmetric || skew ? 2 : 1));
  for (long long e = 0; e < entries; ++e) {
    long long i = 0, j = 0;
    double v = 1.0;
    if (!(in >> i >> j)) throw Error(ErrorCode::parse_error, "truncated Matrix Market data");
    if (field != "pattern" && !(in >> v)) throw Error(ErrorCode::parse_error, "truncated Matrix Market data");
    if (i < 1 || i > rows || j < 1 || j > cols) throw Error(ErrorCode::parse_error, "Matrix Market index out of range");
    t.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
    if ((symmetric || skew) && i != j) t.push_back({static_cast<int>(j - 1), static_cast<int>(i - 1), skew ? -v : v});
  }
  return from_triplets(static_cast<int>(rows), static_cast<int>(cols), std::move(t));
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  return read_matrix_market(in);
}

}  // namespace sp3hex::linalg
