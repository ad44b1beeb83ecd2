#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lobm/book.hpp"
#include "lobm/event.hpp"

namespace lobm {

enum class Area : std::uint8_t { Active, Passive, Outside };
enum class Split : std::uint8_t { Limit, Market, Both };

std::string_view to_string(Area a) noexcept;
std::optional<Area> parse_area(std::string_view text) noexcept;

/// Closed price interval [low, high] in ticks.
struct PriceInterval {
  Ticks low = 0;
  Ticks high = 0;

  constexpr bool contains(Ticks p) const noexcept { return low <= p && p <= high; }
  friend constexpr bool operator==(const PriceInterval&, const PriceInterval&) = default;
};

/// [b - alpha, a + alpha].
constexpr PriceInterval active_interval(const Quotes& q, Ticks alpha) noexcept {
  return {q.best_bid - alpha, q.best_ask + alpha};
}

/// Active on [b - alpha, a + alpha]; Passive on [b - 2alpha, b - alpha) and
/// (a + alpha, a + 2alpha]; Outside elsewhere.
Area classify_area(Ticks price, const Quotes& q, Ticks alpha) noexcept;

/// Price an event is modelled at. Buys quoted above the ask and market buys
/// execute at the ask; sells quoted below the bid and market sells at the bid.
/// A Match is the aggressor's marketable order and always sits at the opposite
/// quote. Everything else keeps its quoted price.
Ticks effective_price(const Event& e, const Quotes& q_ref);

/// The edge a particle moves from (submit) or to (cancel):
/// b - alpha_eff for buys, a + alpha_eff for sells, with alpha_eff = alpha for
/// the active area and 2 alpha for the passive area.
Ticks area_bound(Side side, const Quotes& q_ref, Ticks alpha, Area area);

/// Displacement over one sampling period. The per-second value is
/// displacement / dt; keeping both integers preserves exactness.
struct Velocity {
  Ticks displacement = 0;
  Micros dt = 0;

  double ticks_per_second() const noexcept {
    return static_cast<double>(displacement) * static_cast<double>(kMicrosPerSecond) / static_cast<double>(dt);
  }
  friend constexpr bool operator==(const Velocity&, const Velocity&) = default;
};

/// Submit (and Match) moves from `bound` to p*: displacement = p* - bound.
/// Cancel moves from p* back to `bound`: displacement = bound - p*.
Velocity event_velocity(const Event& e, const Quotes& q_ref, Ticks bound, Micros dt);

/// Momentum in size-units x ticks per sampling period. Dividing by dt (and
/// applying the unit scales) gives quote-currency x size per second.
using RawMomentum = std::int64_t;

struct MomentumOptions {
  /// Also let the resting (maker) side of a Match annihilate: it is treated as a
  /// cancel of the maker-side order at the execution price.
  bool match_both_sides = false;
};

/// size * displacement for an event already classified into `area`.
/// Throws ContractError for Outside or for an unpriced event that needs a price.
RawMomentum event_momentum(const Event& e, const Quotes& q_ref, const AreaConfig& cfg, Area area);

/// Market-order contribution: market submits, matches, and limit submits whose
/// effective price is the opposite best quote.
bool is_market_contribution(const Event& e, const Quotes& q_ref);

struct MomentumSample {
  Micros bucket_end = 0;
  Area area = Area::Active;
  RawMomentum m_limit = 0;
  RawMomentum m_market = 0;
  RawMomentum m_total = 0;

  friend bool operator==(const MomentumSample&, const MomentumSample&) = default;
};

/// Net momentum of every event in the bucket whose effective price falls in
/// `area`, split into limit and market contributions. Throws ContractError
/// when the bucket has no reference quotes.
MomentumSample bucket_net_momentum(const Bucket& b, const AreaConfig& cfg, Area area, Split split = Split::Both,
                                   const MomentumOptions& options = {});

/// One sample per classifiable bucket, in bucket order.
std::vector<MomentumSample> momentum_series(std::span<const Bucket> buckets, const AreaConfig& cfg, Area area,
                                            Split split = Split::Both, const MomentumOptions& options = {});

struct CumulativeSample {
  Micros bucket_end = 0;
  RawMomentum cum_limit = 0;
  RawMomentum cum_market = 0;
  RawMomentum cum_total = 0;

  friend bool operator==(const CumulativeSample&, const CumulativeSample&) = default;
};

/// Prefix sums of limit, market and total momentum.
std::vector<CumulativeSample> cumulative_series(std::span<const MomentumSample> samples);

/// Converts raw momentum to quote-currency x size per second.
double momentum_value(RawMomentum raw, const AreaConfig& cfg) noexcept;

/// Decimal text of momentum_value, rounded half away from zero to `digits`
/// fractional digits with trailing zeros removed. Integer-only, so identical
/// on every platform.
std::string format_momentum(RawMomentum raw, const AreaConfig& cfg, int digits = 6);

}  // namespace lobm
