#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lobm/event.hpp"
#include "lobm/ingest.hpp"

namespace lobm {

/// Log-normal order sizes clipped to [min, max] size-units.
struct SizeDistribution {
  Units median = 20'000;
  double sigma = 1.0;
  Units min = 1;
  Units max = 200'000;
};

/// Parameters of the background stream generator.
///
/// Two anchor orders hold the best bid and ask. New arrivals come at
/// `event_rate` per second: a fraction `match_probability` are market orders
/// that trade against an anchor, the rest are limit orders placed in the active
/// area with probability `active_fraction`, otherwise in the passive area
/// (`passive_share`) or beyond it. Each limit order is cancelled with
/// probability `cancel_fraction` after an exponential lifetime, or else rests
/// until the end of the stream. Quotes take a +-1 tick step with probability
/// `quote_move_probability` per arrival, bounded to `max_drift` ticks from
/// the base quotes.
struct BackgroundParams {
  std::uint64_t seed = 1;
  Micros start = 0;
  double duration_s = 600.0;
  Quotes base_quotes{174, 175};
  Ticks alpha = 50;
  double event_rate = 50.0;
  SizeDistribution sizes;
  double cancel_fraction = 0.986;
  double active_fraction = 0.97;
  double passive_share = 0.5;
  double match_probability = 0.02;
  double mean_lifetime_s = 2.0;
  double quote_move_probability = 0.0;
  Ticks max_drift = 5;
  /// Size of the anchor orders; must cover every match size.
  Units anchor_size = 0;  // 0 = sizes.max

  /// Throws ConfigError when a probability is outside [0, 1] or a rate,
  /// duration or size parameter is not positive.
  void validate() const;
};

/// Deterministic for a given parameter set (own PRNG streams, no
/// implementation-defined distributions). The output is time-sorted.
std::vector<Event> gen_background(const BackgroundParams& params);

enum class SpoofStyle { Traditional, Layered };

/// One spoofing pattern. The first level sits at `price` when given, otherwise
/// `price_offset` ticks outward from the active-area edge under the quotes
/// prevailing at submit time. Layered patterns add `levels - 1` further levels
/// `level_gap` ticks apart, moving away from the spread. `level_submit_ts`
/// optionally gives a submit time per level; all levels cancel at `cancel_ts`.
struct SpoofSpec {
  SpoofStyle style = SpoofStyle::Traditional;
  std::size_t levels = 1;
  Ticks level_gap = 0;
  Side side = Side::Buy;
  std::optional<Ticks> price;
  Ticks price_offset = 1;
  Units size = 0;
  Micros submit_ts = 0;
  Micros cancel_ts = 0;
  std::vector<Micros> level_submit_ts;
  std::string id_prefix = "synthetic";

  std::size_t level_count() const noexcept { return style == SpoofStyle::Traditional ? 1 : levels; }
  /// Throws InjectionError on cancel_ts <= submit_ts, a layered spec with
  /// fewer than two levels, a non-positive size, or mismatched level times.
  void validate() const;
};

struct Injection {
  std::vector<Event> stream;
  std::vector<Event> injected;
  std::vector<std::string> warnings;
};

/// Adds the pattern's submits and cancels (fresh `<prefix>-<n>` order ids) to a
/// time-sorted stream; existing events keep their relative order and injected
/// events follow existing events with the same timestamp. Warns when a level is
/// not in the passive area under the quotes prevailing at its submit time.
/// Throws InjectionError when the pattern's times fall outside the stream span.
Injection inject_spoof(std::span<const Event> stream, const SpoofSpec& spec, const AreaConfig& cfg);

/// Reads a spoof spec from JSON. Prices and sizes are decimal strings in
/// quote currency / base units; timestamps use the canonical formats:
///   {"style": "layered", "levels": 4, "level_gap": "0.08", "side": "buy",
///    "price": "1.20", "size": "50000", "submit_ts": "18:36:13.59",
///    "level_submit_ts": [...], "cancel_ts": "18:38:16.02"}
/// `price_offset` (ticks) may replace `price`.
SpoofSpec parse_spoof_spec(std::string_view json_text, const Precision& precision);

/// Ground-truth label document listing injected events and their ids.
std::string labels_json(std::span<const Injection> injections, const Precision& precision);

/// Market presets mirroring the LUNA/USD and BTC/USD settings.
struct MarketProfile {
  std::string name;
  AreaConfig area;
  BackgroundParams background;
};

MarketProfile luna_profile();
MarketProfile btc_profile();
std::optional<MarketProfile> profile_by_name(std::string_view name);

}  // namespace lobm
