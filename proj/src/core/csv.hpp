#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pfopt::csv {

struct Row {
  int line_number;  // 1-based, including the header line
  std::vector<std::string> fields;
};

// Reads a whole comma-separated file. No quoting support: the toolkit's file
// formats are plain numeric tables. CR is stripped, blank lines skipped.
std::vector<Row> read_file(const std::string& path);

std::optional<double> parse_number(const std::string& field);

// Locale-independent formatting used by every writer so that rerun outputs
// are byte-identical. %.17g round-trips doubles exactly.
std::string format_full(double value);
std::string format_g(double value, int significant = 12);

void write_file(const std::string& path, const std::string& contents);

}  // namespace pfopt::csv
