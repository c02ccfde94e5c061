#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace pfopt {

// Calendar dates are serial day numbers (days since 1970-01-01, negative
// before). Keeps alignment and ordering trivial; formatting only happens at
// the I/O boundary.
using Date = std::int32_t;

Date date_from_ymd(int year, int month, int day);
void ymd_from_date(Date serial, int& year, int& month, int& day);

// Strict "YYYY-MM-DD"; returns nullopt on anything else (including
// out-of-range month/day).
std::optional<Date> parse_date(const std::string& iso);
std::string format_date(Date serial);

bool is_weekday(Date serial);

}  // namespace pfopt
