/**
 * Copyright (c) 2026 the epint authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

#ifndef EPINT_DATE_HPP
#define EPINT_DATE_HPP

#include <cstdint>
#include <cstdio>
#include <string>

#include "epint/common.hpp"

namespace epint {

/// Calendar day as days since 1970-01-01 (UTC). Plain int so that day
/// arithmetic stays ordinary integer arithmetic.
using Day = int32_t;

/// Seconds since 1970-01-01T00:00:00Z.
using Timestamp = int64_t;

namespace detail {

// Howard Hinnant's civil-date algorithms.
inline int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

inline void civil_from_days(int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t yr = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yr + (m <= 2));
}

inline bool leap_year(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

inline unsigned days_in_month(int y, unsigned m) {
  static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && leap_year(y)) return 29;
  return lengths[m - 1];
}

}  // namespace detail

/// Parses "YYYY-MM-DD". Throws IoError on anything else.
inline Day parse_date(const std::string& s) {
  int y;
  unsigned m, d;
  char tail;
  if (std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3 || s.size() != 10)
    throw IoError("bad date '" + s + "': expected YYYY-MM-DD");
  if (m < 1 || m > 12 || d < 1 || d > detail::days_in_month(y, m))
    throw IoError("bad date '" + s + "': out-of-range field");
  return static_cast<Day>(detail::days_from_civil(y, m, d));
}

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (strict UTC). Throws IoError otherwise.
inline Timestamp parse_timestamp(const std::string& s) {
  int y;
  unsigned mo, d, h, mi, se;
  char zone, tail;
  int n = std::sscanf(s.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%c%c",
                      &y, &mo, &d, &h, &mi, &se, &zone, &tail);
  if (n != 7 || zone != 'Z' || s.size() != 20)
    throw IoError("bad timestamp '" + s + "': expected YYYY-MM-DDTHH:MM:SSZ");
  if (mo < 1 || mo > 12 || d < 1 || d > detail::days_in_month(y, mo) ||
      h > 23 || mi > 59 || se > 59)
    throw IoError("bad timestamp '" + s + "': out-of-range field");
  return detail::days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
}

inline Day day_of(Timestamp ts) {
  // Floor division; pre-1970 timestamps round toward -inf.
  int64_t d = ts / 86400;
  if (ts % 86400 < 0) --d;
  return static_cast<Day>(d);
}

inline std::string format_date(Day day) {
  int y;
  unsigned m, d;
  detail::civil_from_days(day, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
  return buf;
}

inline std::string format_timestamp(Timestamp ts) {
  Day day = day_of(ts);
  const int sec = static_cast<int>(ts - static_cast<int64_t>(day) * 86400);  // [0, 86400)
  int y;
  unsigned m, d;
  detail::civil_from_days(day, y, m, d);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", y, m, d,
                sec / 3600 % 24, sec / 60 % 60, sec % 60);
  return buf;
}

/// Closed interval of calendar days.
struct DateInterval {
  Day start = 0;
  Day end = 0;

  int length() const { return static_cast<int>(end - start + 1); }
  bool contains(Day d) const { return d >= start && d <= end; }
};

/// Parses "YYYY-MM-DD/YYYY-MM-DD".
inline DateInterval parse_interval(const std::string& s) {
  auto parts = split(s, '/');
  if (parts.size() != 2)
    throw IoError("bad interval '" + s + "': expected start/end");
  DateInterval iv{parse_date(trim(parts[0])), parse_date(trim(parts[1]))};
  if (iv.start > iv.end)
    throw IoError("bad interval '" + s + "': start after end");
  return iv;
}

}  // namespace epint

#endif  // EPINT_DATE_HPP
