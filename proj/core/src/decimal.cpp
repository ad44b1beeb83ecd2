#include "lobm/decimal.hpp"

#include <cmath>
#include <limits>

#include "lobm/error.hpp"

namespace lobm {
namespace {

__extension__ using Wide = __int128;

constexpr Wide pow10(int n) {
  Wide v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

}  // namespace

ParsedDecimal parse_decimal(std::string_view text) {
  if (text.empty()) throw ParseError(0, "", "empty decimal");
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  ParsedDecimal out;
  bool seen_digit = false;
  bool seen_point = false;
  int significant = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.') {
      if (seen_point) throw ParseError(0, "", "malformed decimal '" + std::string(text) + "'");
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') throw ParseError(0, "", "malformed decimal '" + std::string(text) + "'");
    seen_digit = true;
    if (out.digits != 0 || c != '0') ++significant;
    if (significant > 18) throw ParseError(0, "", "decimal out of range '" + std::string(text) + "'");
    out.digits = out.digits * 10 + (c - '0');
    if (seen_point) ++out.scale;
  }
  if (!seen_digit) throw ParseError(0, "", "malformed decimal '" + std::string(text) + "'");
  if (negative) out.digits = -out.digits;
  return out;
}

DecimalScale DecimalScale::parse(std::string_view text) {
  const ParsedDecimal d = parse_decimal(text);
  if (d.digits <= 0) throw ConfigError("unit must be positive: '" + std::string(text) + "'");
  // strip trailing zeros of the fractional part so 0.010 == 0.01
  std::int64_t mantissa = d.digits;
  int exponent = d.scale;
  while (exponent > 0 && mantissa % 10 == 0) {
    mantissa /= 10;
    --exponent;
  }
  return DecimalScale(mantissa, exponent);
}

std::int64_t DecimalScale::to_units(std::string_view text) const {
  const ParsedDecimal d = parse_decimal(text);
  // value = digits * 10^-scale ; unit = mantissa * 10^-exponent
  // units = digits * 10^exponent / (mantissa * 10^scale)
  const Wide num = static_cast<Wide>(d.digits) * pow10(exponent_);
  const Wide den = static_cast<Wide>(mantissa_) * pow10(d.scale);
  if (num % den != 0) {
    throw PrecisionError(0, "", "'" + std::string(text) + "' is not a multiple of " + to_string());
  }
  const Wide units = num / den;
  if (units > std::numeric_limits<std::int64_t>::max() || units < std::numeric_limits<std::int64_t>::min()) {
    throw ParseError(0, "", "value out of range '" + std::string(text) + "'");
  }
  return static_cast<std::int64_t>(units);
}

std::string DecimalScale::format(std::int64_t units) const {
  Wide scaled = static_cast<Wide>(units) * mantissa_;
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  const Wide divisor = pow10(exponent_);
  Wide whole = scaled / divisor;
  Wide frac = scaled % divisor;

  std::string int_part;
  do {
    int_part.insert(int_part.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
    whole /= 10;
  } while (whole > 0);

  std::string frac_part(static_cast<std::size_t>(exponent_), '0');
  for (int i = exponent_ - 1; i >= 0; --i) {
    frac_part[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(frac % 10));
    frac /= 10;
  }
  while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();

  std::string out = negative ? "-" : "";
  out += int_part;
  if (!frac_part.empty()) out += "." + frac_part;
  return out;
}

double DecimalScale::unit_value() const noexcept {
  return static_cast<double>(mantissa_) / std::pow(10.0, exponent_);
}

double DecimalScale::to_double(std::int64_t units) const noexcept {
  return static_cast<double>(units) * unit_value();
}

}  // namespace lobm
