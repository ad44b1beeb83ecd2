#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "lobm/decimal.hpp"
#include "lobm/time.hpp"

namespace lobm {

/// Price in integer ticks.
using Ticks = std::int64_t;
/// Order size in integer size-units.
using Units = std::int64_t;

enum class Action : std::uint8_t { Submit, Cancel, Match };
enum class Side : std::uint8_t { Buy, Sell };
enum class OrderKind : std::uint8_t { Limit, Market };

constexpr Side opposite(Side s) noexcept { return s == Side::Buy ? Side::Sell : Side::Buy; }

std::string_view to_string(Action a) noexcept;
std::string_view to_string(Side s) noexcept;
std::string_view to_string(OrderKind k) noexcept;

/// Case-insensitive; "open" and "submit" both map to Submit. Returns nullopt on unknown text.
std::optional<Action> parse_action(std::string_view text) noexcept;
std::optional<Side> parse_side(std::string_view text) noexcept;
std::optional<OrderKind> parse_kind(std::string_view text) noexcept;

/// One Level-3 record.
///
/// For a Match, `order_id` names the resting (maker) order being filled,
/// `side` is the aggressor side, `kind` the aggressor kind and `price` the
/// execution price. Market submits and matches may leave `price` empty.
struct Event {
  Micros ts = 0;
  std::string order_id;
  Action action = Action::Submit;
  Side side = Side::Buy;
  OrderKind kind = OrderKind::Limit;
  std::optional<Ticks> price;
  Units size = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

/// True when the event satisfies the record invariants: positive size, positive
/// price when present, and a price on every limit submit and cancel.
bool well_formed(const Event& e) noexcept;

/// Best bid / best ask in ticks.
struct Quotes {
  Ticks best_bid = 0;
  Ticks best_ask = 0;

  constexpr bool valid() const noexcept { return best_bid > 0 && best_ask > 0 && best_bid < best_ask; }
  friend constexpr bool operator==(const Quotes&, const Quotes&) = default;
};

/// Midprice kept exactly as twice its value in ticks.
struct Midprice {
  Ticks twice = 0;

  constexpr double ticks() const noexcept { return static_cast<double>(twice) / 2.0; }
  friend constexpr auto operator<=>(const Midprice&, const Midprice&) = default;
};

constexpr Midprice midprice(const Quotes& q) noexcept { return Midprice{q.best_bid + q.best_ask}; }

/// (z_cur - z_prev) / dt in ticks per second. Throws ContractError when dt <= 0.
double midprice_velocity(Midprice prev, Midprice cur, Micros dt);

/// Active-area depth, sampling period and the fixed-point scales.
struct AreaConfig {
  Ticks alpha = 50;
  Micros dt = 100'000;
  DecimalScale tick_size{1, 2};
  DecimalScale size_unit{1, 3};

  /// Throws ConfigError when alpha or dt is not positive.
  void validate() const;
};

}  // namespace lobm
