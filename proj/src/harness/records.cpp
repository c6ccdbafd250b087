#include "sp3hex/harness/records.hpp"

#include "sp3hex/error.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sp3hex::harness {

namespace {

constexpr const char* kEigenHeader = "index,re,im,value_re,value_im,residual,converged";
constexpr const char* kPowerHeader = "q,r,material,fuel,power";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T parse_number(const std::string& text, int line) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::parse_error, "csv line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return value;
}

std::vector<std::vector<std::string>> read_table(std::istream& in, const char* header, std::size_t columns) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw Error(ErrorCode::parse_error, std::string("csv: expected header '") + header + "'");
  }
  std::vector<std::vector<std::string>> rows;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != columns) {
      throw Error(ErrorCode::parse_error, "csv line " + std::to_string(number) + ": expected " +
                                              std::to_string(columns) + " columns");
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_eigen_csv(std::ostream& out, const std::vector<EigenRow>& rows) {
  out << kEigenHeader << '\n';
  for (const auto& r : rows) {
    out << r.index << ',' << format_double(r.re) << ',' << format_double(r.im) << ',' << format_double(r.value_re)
        << ',' << format_double(r.value_im) << ',' << format_double(r.residual) << ',' << (r.converged ? 1 : 0)
        << '\n';
  }
}

std::vector<EigenRow> read_eigen_csv(std::istream& in) {
  std::vector<EigenRow> rows;
  int line = 1;
  for (const auto& c : read_table(in, kEigenHeader, 7)) {
    ++line;
    EigenRow r;
    r.index = parse_number<int>(c[0], line);
    r.re = parse_number<double>(c[1], line);
    r.im = parse_number<double>(c[2], line);
    r.value_re = parse_number<double>(c[3], line);
    r.value_im = parse_number<double>(c[4], line);
    r.residual = parse_number<double>(c[5], line);
    r.converged = parse_number<int>(c[6], line) != 0;
    rows.push_back(r);
  }
  return rows;
}

void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows) {
  out << kPowerHeader << '\n';
  for (const auto& r : rows) {
    out << r.q << ',' << r.r << ',' << r.material << ',' << (r.fuel ? 1 : 0) << ',' << format_double(r.power) << '\n';
  }
}

std::vector<PowerRow> read_power_csv(std::istream& in) {
  std::vector<PowerRow> rows;
  int line = 1;
  for (const auto& c : read_table(in, kPowerHeader, 5)) {
    ++line;
    PowerRow r;
    r.q = parse_number<int>(c[0], line);
    r.r = parse_number<int>(c[1], line);
    r.material = parse_number<int>(c[2], line);
    r.fuel = parse_number<int>(c[3], line) != 0;
    r.power = parse_number<double>(c[4], line);
    rows.push_back(r);
  }
  return rows;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot open '" + tmp + "' for writing");
    out << contents;
    if (!out) throw Error(ErrorCode::io_error, "failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot rename '" + tmp + "': " + ec.message());
}

}  // namespace sp3hex::harness
