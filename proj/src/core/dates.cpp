#include "core/dates.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace pfopt {

namespace {

constexpr std::array<int, 12> kDaysInMonth = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

}  // namespace

// Civil-from-days / days-from-civil per the standard proleptic Gregorian
// algorithms (era = 400-year cycle).
Date date_from_ymd(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return static_cast<Date>(era * 146097 + static_cast<int>(doe) - 719468);
}

void ymd_from_date(Date serial, int& year, int& month, int& day) {
  int z = serial + 719468;
  const int era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int y = static_cast<int>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  year = y + (month <= 2);
}

std::optional<Date> parse_date(const std::string& iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  auto num = [&](int from, int to, int& out) {
    auto [p, ec] = std::from_chars(iso.data() + from, iso.data() + to, out);
    return ec == std::errc() && p == iso.data() + to;
  };
  if (!num(0, 4, y) || !num(5, 7, m) || !num(8, 10, d)) return std::nullopt;
  if (m < 1 || m > 12 || d < 1) return std::nullopt;
  int dim = kDaysInMonth[m - 1] + (m == 2 && is_leap(y) ? 1 : 0);
  if (d > dim) return std::nullopt;
  return date_from_ymd(y, m, d);
}

std::string format_date(Date serial) {
  int y, m, d;
  ymd_from_date(serial, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return buf;
}

bool is_weekday(Date serial) {
  // 1970-01-01 was a Thursday (weekday index 4 with Monday = 0).
  int wd = static_cast<int>(((serial % 7) + 7 + 3) % 7);
  return wd < 5;
}

}  // namespace pfopt
