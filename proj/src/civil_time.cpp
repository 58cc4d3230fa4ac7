#include "lifelog/civil_time.hpp"

#include <array>
#include <cstdio>

namespace lifelog {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool read_digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

std::optional<Date> make_date(int y, int m, int d) {
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

constexpr std::array<std::string_view, 7> kWeekdays = {
    "sunday", "monday", "tuesday", "wednesday", "thursday", "friday", "saturday"};

}  // namespace

Date Timestamp::local_date() const {
  return Date{std::chrono::days{floor_div(local_seconds(), kSecondsPerDay)}};
}

std::int32_t Timestamp::local_time_of_day() const {
  std::int64_t s = local_seconds();
  return static_cast<std::int32_t>(s - floor_div(s, kSecondsPerDay) * kSecondsPerDay);
}

unsigned Timestamp::local_weekday() const { return weekday_of(local_date()); }

std::optional<Timestamp> parse_rfc3339(std::string_view s) {
  int y, mo, d, h, mi, se;
  if (s.size() < 20) return std::nullopt;
  if (!read_digits(s, 0, 4, y) || s[4] != '-' || !read_digits(s, 5, 2, mo) || s[7] != '-' ||
      !read_digits(s, 8, 2, d) || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') ||
      !read_digits(s, 11, 2, h) || s[13] != ':' || !read_digits(s, 14, 2, mi) || s[16] != ':' ||
      !read_digits(s, 17, 2, se))
    return std::nullopt;
  if (h > 23 || mi > 59 || se > 59) return std::nullopt;
  auto date = make_date(y, mo, d);
  if (!date) return std::nullopt;

  std::string_view zone = s.substr(19);
  int offset = 0;
  if (zone == "Z" || zone == "z") {
    offset = 0;
  } else if (zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') && zone[3] == ':') {
    int oh, om;
    if (!read_digits(zone, 1, 2, oh) || !read_digits(zone, 4, 2, om)) return std::nullopt;
    if (oh > 23 || om > 59) return std::nullopt;
    offset = oh * 60 + om;
    if (zone[0] == '-') offset = -offset;
  } else {
    return std::nullopt;
  }

  std::int64_t local = std::int64_t{date->time_since_epoch().count()} * kSecondsPerDay +
                       h * 3600 + mi * 60 + se;
  return Timestamp{local - std::int64_t{offset} * 60, offset};
}

std::string format_rfc3339(const Timestamp& ts) {
  using namespace std::chrono;
  year_month_day ymd{ts.local_date()};
  std::int32_t tod = ts.local_time_of_day();
  char buf[40];
  int off = ts.offset_minutes;
  char sign = off < 0 ? '-' : '+';
  if (off < 0) off = -off;
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d%c%02d:%02d",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), tod / 3600, (tod / 60) % 60, tod % 60, sign,
                off / 60, off % 60);
  return buf;
}

std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10) return std::nullopt;
  char sep = s[4];
  if ((sep != '/' && sep != '-') || s[7] != sep) return std::nullopt;
  int y, m, d;
  if (!read_digits(s, 0, 4, y) || !read_digits(s, 5, 2, m) || !read_digits(s, 8, 2, d))
    return std::nullopt;
  return make_date(y, m, d);
}

std::string format_date(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d/%02u/%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string_view weekday_name(unsigned weekday) { return kWeekdays.at(weekday % 7); }

std::optional<unsigned> parse_weekday(std::string_view name) {
  for (unsigned i = 0; i < kWeekdays.size(); ++i)
    if (kWeekdays[i] == name) return i;
  return std::nullopt;
}

unsigned weekday_of(Date d) { return std::chrono::weekday{d}.c_encoding(); }

std::optional<std::int32_t> parse_clock(std::string_view s) {
  int h, m;
  if (s.size() != 5 || s[2] != ':' || !read_digits(s, 0, 2, h) || !read_digits(s, 3, 2, m))
    return std::nullopt;
  if (m > 59 || h > 24 || (h == 24 && m != 0)) return std::nullopt;
  return h * 3600 + m * 60;
}

std::string format_clock(std::int32_t seconds) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", seconds / 3600, (seconds / 60) % 60);
  return buf;
}

}  // namespace lifelog
