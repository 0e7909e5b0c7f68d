#pragma once

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace cogwear {

inline constexpr std::int64_t kMinutesPerDay = 1440;

inline constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// A wall-clock minute, counted from 1970-01-01T00:00 of the recording's
/// local clock. No time-zone information is attached.
struct MinuteStamp {
  std::int64_t minutes = 0;

  constexpr auto operator<=>(const MinuteStamp&) const = default;

  constexpr MinuteStamp operator+(std::int64_t m) const noexcept { return {minutes + m}; }
  constexpr std::int64_t operator-(MinuteStamp other) const noexcept { return minutes - other.minutes; }

  /// Calendar day number (days since 1970-01-01).
  constexpr std::int64_t day() const noexcept { return floor_div(minutes, kMinutesPerDay); }
  constexpr int minute_of_day() const noexcept {
    return static_cast<int>(minutes - day() * kMinutesPerDay);
  }
  constexpr double clock_hour() const noexcept { return minute_of_day() / 60.0; }

  static constexpr MinuteStamp from_day(std::int64_t day, int minute_of_day = 0) noexcept {
    return {day * kMinutesPerDay + minute_of_day};
  }

  static constexpr MinuteStamp from_civil(int y, unsigned mo, unsigned d, int hh = 0, int mm = 0) noexcept {
    namespace c = std::chrono;
    const c::sys_days sd{c::year{y} / c::month{mo} / c::day{d}};
    return from_day(sd.time_since_epoch().count(), hh * 60 + mm);
  }

  /// Parses `YYYY-MM-DDTHH:MM`. Returns nullopt on any deviation.
  static std::optional<MinuteStamp> parse(std::string_view s) noexcept {
    if (s.size() != 16 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':') return std::nullopt;
    auto num = [&](std::size_t pos, std::size_t len, int& out) {
      const char* b = s.data() + pos;
      auto [p, ec] = std::from_chars(b, b + len, out);
      return ec == std::errc{} && p == b + len;
    };
    int y = 0, mo = 0, d = 0, hh = 0, mm = 0;
    if (!num(0, 4, y) || !num(5, 2, mo) || !num(8, 2, d) || !num(11, 2, hh) || !num(14, 2, mm)) return std::nullopt;
    namespace c = std::chrono;
    const c::year_month_day ymd{c::year{y}, c::month{static_cast<unsigned>(mo)}, c::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh < 0 || hh > 23 || mm < 0 || mm > 59) return std::nullopt;
    return from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d), hh, mm);
  }

  std::string to_string() const {
    using namespace std::chrono;
    const year_month_day ymd{sys_days{days{day()}}};
    const int mod = minute_of_day();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), mod / 60, mod % 60);
    return buf;
  }
};

}  // namespace cogwear
