#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace csei {

// Calendar day in UTC, stored as days since 1970-01-01.
struct Date {
  std::int32_t days = 0;

  friend auto operator<=>(const Date&, const Date&) = default;

  // Floor division so pre-epoch timestamps land on the correct day.
  static Date from_unix_seconds(std::int64_t ts) {
    const std::int64_t d = ts >= 0 ? ts / 86400 : (ts - 86399) / 86400;
    return Date{static_cast<std::int32_t>(d)};
  }

  static std::optional<Date> parse(std::string_view iso);

  std::string to_string() const {
    const std::chrono::year_month_day ymd{
        std::chrono::sys_days{std::chrono::days{days}}};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
  }
};

// Strict "YYYY-MM-DD"; rejects impossible calendar dates.
inline std::optional<Date> Date::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t from, std::size_t len, int& out) {
    out = 0;
    for (std::size_t i = from; i < from + len; ++i) {
      if (iso[i] < '0' || iso[i] > '9') return false;
      out = out * 10 + (iso[i] - '0');
    }
    return true;
  };
  int y = 0, m = 0, d = 0;
  if (!digits(0, 4, y) || !digits(5, 2, m) || !digits(8, 2, d)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) return std::nullopt;
  const auto sd = std::chrono::sys_days{ymd};
  return Date{static_cast<std::int32_t>(sd.time_since_epoch().count())};
}

}  // namespace csei
