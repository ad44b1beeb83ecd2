#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lobm {

/// Microseconds since the Unix epoch. Clock-of-day timestamps without a date
/// are placed on 1970-01-01.
using Micros = std::int64_t;

inline constexpr Micros kMicrosPerSecond = 1'000'000;
inline constexpr Micros kMicrosPerDay = 86'400 * kMicrosPerSecond;

/// Accepts `HH:MM:SS[.ffffff]`, the dotted `HH:MM.SS.ff` form used in some
/// hand-written tables, and ISO-8601 `YYYY-MM-DDTHH:MM:SS[.ffffff][Z|+00:00]`.
/// Fractions longer than six digits must be zero beyond the microsecond.
Micros parse_timestamp(std::string_view text);

/// `HH:MM:SS.ffffff` for times on 1970-01-01, ISO-8601 with a `Z` suffix otherwise.
/// parse_timestamp(format_timestamp(t)) == t for every t >= 0.
std::string format_timestamp(Micros ts);

/// Parses a non-negative decimal number of seconds ("0.1", "600") into microseconds.
Micros parse_seconds(std::string_view text);

}  // namespace lobm
