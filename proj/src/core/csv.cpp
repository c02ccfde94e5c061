#include "core/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace pfopt::csv {

std::vector<Row> read_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open file: " + path);
  std::vector<Row> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Row row;
    row.line_number = line_number;
    std::size_t start = 0;
    for (;;) {
      const std::size_t pos = line.find(',', start);
      if (pos == std::string::npos) {
        row.fields.push_back(line.substr(start));
        break;
      }
      row.fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> parse_number(const std::string& field) {
  if (field.empty()) return std::nullopt;
  double value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [p, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || p != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string format_g(double value, int significant) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", significant, value);
  return buf;
}

void write_file(const std::string& path, const std::string& contents) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io_error, "cannot write file: " + path);
  out << contents;
  require(out.good(), Errc::io_error, "write failed: " + path);
}

}  // namespace pfopt::csv
