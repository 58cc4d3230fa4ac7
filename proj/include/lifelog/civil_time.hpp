#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lifelog {

using Date = std::chrono::sys_days;

// An instant with the UTC offset it was captured in. All "local" notions
// (calendar date, weekday, time of day) are derived from utc + offset.
struct Timestamp {
  std::int64_t utc_seconds = 0;
  std::int32_t offset_minutes = 0;

  std::int64_t local_seconds() const { return utc_seconds + std::int64_t{offset_minutes} * 60; }
  Date local_date() const;
  // Seconds since local midnight, [0, 86400).
  std::int32_t local_time_of_day() const;
  unsigned local_weekday() const;  // 0 = sunday

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

// Accepts "YYYY-MM-DDTHH:MM:SS" followed by "Z" or "+HH:MM"/"-HH:MM".
// Fractional seconds are rejected; the data model has second precision.
std::optional<Timestamp> parse_rfc3339(std::string_view text);
std::string format_rfc3339(const Timestamp& ts);

// "yyyy/mm/dd" or "yyyy-mm-dd"; rejects impossible dates.
std::optional<Date> parse_date(std::string_view text);
// Always "yyyy/mm/dd".
std::string format_date(Date d);

// Weekday names are lowercase english, index 0 = sunday.
std::string_view weekday_name(unsigned weekday);
std::optional<unsigned> parse_weekday(std::string_view name);
unsigned weekday_of(Date d);

// "HH:MM" <-> seconds since midnight. "24:00" is accepted as 86400.
std::optional<std::int32_t> parse_clock(std::string_view text);
std::string format_clock(std::int32_t seconds);

}  // namespace lifelog
