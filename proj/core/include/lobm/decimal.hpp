#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lobm {

/// Fixed-point scale: one unit equals `mantissa * 10^-exponent` (e.g. 0.01 is {1, 2},
/// 0.5 is {5, 1}). Used for both price ticks and size units so that all internal
/// arithmetic happens on integers.
class DecimalScale {
 public:
  constexpr DecimalScale() = default;
  constexpr DecimalScale(std::int64_t mantissa, int exponent) : mantissa_(mantissa), exponent_(exponent) {}

  /// Parses a positive decimal literal such as "0.01" or "0.00001".
  static DecimalScale parse(std::string_view text);

  constexpr std::int64_t mantissa() const noexcept { return mantissa_; }
  constexpr int exponent() const noexcept { return exponent_; }

  /// Exact conversion of a decimal literal to a whole number of units.
  /// Throws PrecisionError when the value is not a multiple of the unit and
  /// ParseError when the text is not a decimal number.
  std::int64_t to_units(std::string_view text) const;

  /// Shortest decimal text that converts back to `units` exactly.
  std::string format(std::int64_t units) const;

  double to_double(std::int64_t units) const noexcept;
  double unit_value() const noexcept;
  std::string to_string() const { return format(1); }

  friend constexpr bool operator==(const DecimalScale&, const DecimalScale&) = default;

 private:
  std::int64_t mantissa_ = 1;
  int exponent_ = 0;
};

/// Parses a plain decimal literal into (digits, scale) so that value = digits * 10^-scale.
struct ParsedDecimal {
  std::int64_t digits = 0;
  int scale = 0;
};
ParsedDecimal parse_decimal(std::string_view text);

}  // namespace lobm
