#include "lobm/time.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>

#include "lobm/decimal.hpp"
#include "lobm/error.hpp"

namespace lobm {
namespace {

[[noreturn]] void bad(std::string_view text, const char* why) {
  throw ParseError(0, "ts", "invalid timestamp '" + std::string(text) + "': " + why);
}

int read_int(std::string_view text, std::string_view full, std::size_t width) {
  if (text.size() != width) bad(full, "unexpected field width");
  int v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') bad(full, "non-digit");
    v = v * 10 + (c - '0');
  }
  return v;
}

Micros read_fraction(std::string_view frac, std::string_view full) {
  if (frac.empty()) bad(full, "empty fraction");
  Micros micros = 0;
  for (std::size_t i = 0; i < frac.size(); ++i) {
    const char c = frac[i];
    if (c < '0' || c > '9') bad(full, "non-digit in fraction");
    if (i < 6) {
      micros = micros * 10 + (c - '0');
    } else if (c != '0') {
      bad(full, "sub-microsecond precision");
    }
  }
  for (std::size_t i = frac.size(); i < 6; ++i) micros *= 10;
  return micros;
}

Micros clock_of_day(int h, int m, int s, Micros frac, std::string_view full) {
  if (h > 23 || m > 59 || s > 60) bad(full, "clock field out of range");
  return ((static_cast<Micros>(h) * 60 + m) * 60 + s) * kMicrosPerSecond + frac;
}

// HH:MM:SS[.f] (sep2 ':') or HH:MM.SS.f (sep2 '.')
Micros parse_clock(std::string_view t, std::string_view full) {
  if (t.size() < 8 || t[2] != ':' || (t[5] != ':' && t[5] != '.')) bad(full, "expected HH:MM:SS");
  const int h = read_int(t.substr(0, 2), full, 2);
  const int m = read_int(t.substr(3, 2), full, 2);
  const int s = read_int(t.substr(6, 2), full, 2);
  Micros frac = 0;
  if (t.size() > 8) {
    if (t[8] != '.') bad(full, "expected fractional seconds");
    frac = read_fraction(t.substr(9), full);
  } else if (t[5] == '.') {
    bad(full, "dotted form requires a fraction");
  }
  return clock_of_day(h, m, s, frac, full);
}

}  // namespace

Micros parse_timestamp(std::string_view text) {
  if (text.size() >= 10 && text[4] == '-' && text[7] == '-') {
    using namespace std::chrono;
    const int y = read_int(text.substr(0, 4), text, 4);
    const int mo = read_int(text.substr(5, 2), text, 2);
    const int d = read_int(text.substr(8, 2), text, 2);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) bad(text, "invalid calendar date");
    const Micros day_start = static_cast<Micros>(sys_days{ymd}.time_since_epoch().count()) * kMicrosPerDay;
    if (text.size() == 10) return day_start;
    if (text[10] != 'T' && text[10] != ' ') bad(text, "expected 'T' separator");
    std::string_view rest = text.substr(11);
    if (!rest.empty() && (rest.back() == 'Z' || rest.back() == 'z')) {
      rest.remove_suffix(1);
    } else if (rest.size() > 6 && (rest.ends_with("+00:00") || rest.ends_with("-00:00"))) {
      rest.remove_suffix(6);
    }
    if (rest.size() > 8 && rest[5] != ':') bad(text, "expected HH:MM:SS");
    return day_start + parse_clock(rest, text);
  }
  return parse_clock(text, text);
}

std::string format_timestamp(Micros ts) {
  std::array<char, 48> buf{};
  Micros day_index = ts / kMicrosPerDay;
  Micros in_day = ts % kMicrosPerDay;
  if (in_day < 0) {
    in_day += kMicrosPerDay;
    --day_index;
  }
  const Micros secs = in_day / kMicrosPerSecond;
  const Micros frac = in_day % kMicrosPerSecond;
  const int h = static_cast<int>(secs / 3600);
  const int m = static_cast<int>((secs / 60) % 60);
  const int s = static_cast<int>(secs % 60);
  if (day_index == 0) {
    std::snprintf(buf.data(), buf.size(), "%02d:%02d:%02d.%06lld", h, m, s, static_cast<long long>(frac));
    return buf.data();
  }
  using namespace std::chrono;
  const year_month_day ymd{sys_days{days{day_index}}};
  std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02d.%06lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h, m, s,
                static_cast<long long>(frac));
  return buf.data();
}

Micros parse_seconds(std::string_view text) {
  static const DecimalScale kMicro(1, 6);
  try {
    const Micros v = kMicro.to_units(text);
    if (v < 0) throw ConfigError("negative duration '" + std::string(text) + "'");
    return v;
  } catch (const ParseError& e) {
    throw ConfigError("invalid duration '" + std::string(text) + "': " + e.what());
  }
}

}  // namespace lobm
