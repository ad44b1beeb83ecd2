#include "lobm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "lobm/book.hpp"
#include "lobm/error.hpp"
#include "lobm/momentum.hpp"

namespace lobm {
namespace {

using nlohmann::json;

// mt19937_64 output is fixed by the standard; the transforms below are ours so
// streams do not depend on the standard library's distribution algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  /// Uniform integer in [lo, hi].
  Ticks between(Ticks lo, Ticks hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<Ticks>(static_cast<std::uint64_t>(uniform() * static_cast<double>(span)) % span);
  }

 private:
  std::mt19937_64 engine_;
};

struct Resting {
  std::uint64_t seq;
  Side side;
  Ticks price;
  Units remaining;
};

class BackgroundGenerator {
 public:
  explicit BackgroundGenerator(const BackgroundParams& p)
      : p_(p), rng_(p.seed), quotes_(p.base_quotes),
        anchor_size_(p.anchor_size > 0 ? p.anchor_size : p.sizes.max) {}

  std::vector<Event> run() {
    const Micros end = p_.start + static_cast<Micros>(std::llround(p_.duration_s * kMicrosPerSecond));
    now_ = p_.start;
    bid_anchor_ = open_anchor(Side::Buy, quotes_.best_bid);
    ask_anchor_ = open_anchor(Side::Sell, quotes_.best_ask);

    double arrival = static_cast<double>(p_.start);
    arrival += rng_.exponential(1.0 / p_.event_rate) * kMicrosPerSecond;
    for (;;) {
      const auto next_arrival = static_cast<Micros>(std::llround(arrival));
      if (!pending_.empty() && pending_.top().at <= next_arrival) {
        fire_cancel();
        continue;
      }
      if (next_arrival > end) break;
      now_ = std::max(now_, next_arrival);
      on_arrival();
      arrival += rng_.exponential(1.0 / p_.event_rate) * kMicrosPerSecond;
    }
    while (!pending_.empty()) fire_cancel();
    return std::move(out_);
  }

 private:
  struct PendingCancel {
    Micros at;
    std::uint64_t seq;
    friend bool operator>(const PendingCancel& a, const PendingCancel& b) {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  static std::string bg_id(std::uint64_t seq) { return "bg-" + std::to_string(seq); }

  void emit(Action action, Side side, OrderKind kind, std::optional<Ticks> price, Units size, std::string id) {
    Event e;
    e.ts = now_;
    e.order_id = std::move(id);
    e.action = action;
    e.side = side;
    e.kind = kind;
    e.price = price;
    e.size = size;
    out_.push_back(std::move(e));
  }

  Resting open_anchor(Side side, Ticks price) {
    const Resting r{next_seq_++, side, price, anchor_size_};
    emit(Action::Submit, side, OrderKind::Limit, price, r.remaining, "anchor-" + std::to_string(r.seq));
    return r;
  }

  static std::string anchor_id(const Resting& r) { return "anchor-" + std::to_string(r.seq); }

  Units draw_size() {
    const double raw = static_cast<double>(p_.sizes.median) * std::exp(p_.sizes.sigma * rng_.normal());
    const auto units = static_cast<Units>(std::llround(raw));
    return std::clamp(units, p_.sizes.min, p_.sizes.max);
  }

  void on_arrival() {
    const double u = rng_.uniform();
    if (u < p_.quote_move_probability) {
      move_quotes();
    } else if (u < p_.quote_move_probability + p_.match_probability) {
      trade();
    } else {
      place_limit();
    }
  }

  void trade() {
    const Side aggressor = rng_.bernoulli(0.5) ? Side::Buy : Side::Sell;
    Resting& anchor = aggressor == Side::Buy ? ask_anchor_ : bid_anchor_;
    const Units size = draw_size();
    if (size >= anchor.remaining) {
      // Replenish first so the side never goes empty.
      const Resting old = anchor;
      anchor = open_anchor(old.side, old.price);
      emit(Action::Match, aggressor, OrderKind::Market, old.price, old.remaining, anchor_id(old));
      return;
    }
    anchor.remaining -= size;
    emit(Action::Match, aggressor, OrderKind::Market, anchor.price, size, anchor_id(anchor));
  }

  void place_limit() {
    const Side side = rng_.bernoulli(0.5) ? Side::Buy : Side::Sell;
    const Ticks a = p_.alpha;
    Ticks lo = 0;
    Ticks hi = 0;
    const bool active = rng_.bernoulli(p_.active_fraction);
    const bool passive = !active && rng_.bernoulli(p_.passive_share);
    if (side == Side::Buy) {
      const Ticks b = quotes_.best_bid;
      if (active) {
        lo = b - a, hi = b;
      } else if (passive) {
        lo = b - 2 * a, hi = b - a - 1;
      } else {
        lo = b - 4 * a, hi = b - 2 * a - 1;
      }
    } else {
      const Ticks k = quotes_.best_ask;
      if (active) {
        lo = k, hi = k + a;
      } else if (passive) {
        lo = k + a + 1, hi = k + 2 * a;
      } else {
        lo = k + 2 * a + 1, hi = k + 4 * a;
      }
    }
    lo = std::max<Ticks>(lo, 1);
    hi = std::max(hi, lo);
    const Ticks price = rng_.between(lo, hi);
    const Units size = draw_size();
    const std::uint64_t seq = next_seq_++;
    emit(Action::Submit, side, OrderKind::Limit, price, size, bg_id(seq));
    resting_[seq] = Resting{seq, side, price, size};
    book_side(side).emplace(std::make_pair(price, seq));
    if (rng_.bernoulli(p_.cancel_fraction)) {
      const double life = rng_.exponential(p_.mean_lifetime_s) * kMicrosPerSecond;
      pending_.push({now_ + std::max<Micros>(1, static_cast<Micros>(std::llround(life))), seq});
    }
  }

  std::set<std::pair<Ticks, std::uint64_t>>& book_side(Side s) { return s == Side::Buy ? bids_ : asks_; }

  void remove_resting(const Resting& r) {
    book_side(r.side).erase({r.price, r.seq});
    resting_.erase(r.seq);
  }

  void fire_cancel() {
    const PendingCancel c = pending_.top();
    pending_.pop();
    const auto it = resting_.find(c.seq);
    if (it == resting_.end()) return;  // swept by a quote move
    now_ = std::max(now_, c.at);
    const Resting r = it->second;
    emit(Action::Cancel, r.side, OrderKind::Limit, r.price, r.remaining, bg_id(r.seq));
    remove_resting(r);
  }

  void move_quotes() {
    if (p_.max_drift == 0) return;
    const Ticks offset = quotes_.best_bid - p_.base_quotes.best_bid;
    int step = rng_.bernoulli(0.5) ? 1 : -1;
    if (offset + step > p_.max_drift) step = -1;
    if (offset + step < -p_.max_drift) step = 1;
    if (step < 0 && quotes_.best_bid - 1 <= 0) return;

    const Quotes next{quotes_.best_bid + step, quotes_.best_ask + step};
    if (step > 0) {
      const Resting new_ask = open_anchor(Side::Sell, next.best_ask);
      sweep(Side::Sell, [&](Ticks p) { return p < next.best_ask; }, Side::Buy);
      match_out(ask_anchor_, Side::Buy);
      ask_anchor_ = new_ask;
      const Resting old_bid = bid_anchor_;
      bid_anchor_ = open_anchor(Side::Buy, next.best_bid);
      emit(Action::Cancel, Side::Buy, OrderKind::Limit, old_bid.price, old_bid.remaining, anchor_id(old_bid));
    } else {
      const Resting new_bid = open_anchor(Side::Buy, next.best_bid);
      sweep(Side::Buy, [&](Ticks p) { return p > next.best_bid; }, Side::Sell);
      match_out(bid_anchor_, Side::Sell);
      bid_anchor_ = new_bid;
      const Resting old_ask = ask_anchor_;
      ask_anchor_ = open_anchor(Side::Sell, next.best_ask);
      emit(Action::Cancel, Side::Sell, OrderKind::Limit, old_ask.price, old_ask.remaining, anchor_id(old_ask));
    }
    quotes_ = next;
  }

  void match_out(const Resting& r, Side aggressor) {
    emit(Action::Match, aggressor, OrderKind::Market, r.price, r.remaining, anchor_id(r));
  }

  template <typename Crosses>
  void sweep(Side resting_side, Crosses crosses, Side aggressor) {
    std::vector<Resting> hit;
    for (const auto& [price, seq] : book_side(resting_side)) {
      if (crosses(price)) hit.push_back(resting_.at(seq));
    }
    for (const Resting& r : hit) {
      emit(Action::Match, aggressor, OrderKind::Market, r.price, r.remaining, bg_id(r.seq));
      remove_resting(r);
    }
  }

  const BackgroundParams& p_;
  Rng rng_;
  Quotes quotes_;
  Units anchor_size_;
  Micros now_ = 0;
  std::uint64_t next_seq_ = 1;
  Resting bid_anchor_{};
  Resting ask_anchor_{};
  std::map<std::uint64_t, Resting> resting_;
  std::set<std::pair<Ticks, std::uint64_t>> bids_;
  std::set<std::pair<Ticks, std::uint64_t>> asks_;
  std::priority_queue<PendingCancel, std::vector<PendingCancel>, std::greater<>> pending_;
  std::vector<Event> out_;
};

Ticks decimal_ticks(const json& j, const char* key, const DecimalScale& scale) {
  const auto& v = j.at(key);
  const std::string text = v.is_string() ? v.get<std::string>() : v.dump();
  try {
    return scale.to_units(text);
  } catch (const ParseError& e) {
    throw InjectionError(std::string("spec field '") + key + "': " + e.what());
  }
}

Micros spec_time(const json& v, const char* key) {
  if (!v.is_string()) throw InjectionError(std::string("spec field '") + key + "' must be a timestamp string");
  try {
    return parse_timestamp(v.get<std::string>());
  } catch (const ParseError& e) {
    throw InjectionError(std::string("spec field '") + key + "': " + e.what());
  }
}

json event_json(const Event& e, const Precision& precision) {
  return {{"ts", format_timestamp(e.ts)},
          {"order_id", e.order_id},
          {"action", std::string(to_string(e.action))},
          {"side", std::string(to_string(e.side))},
          {"kind", std::string(to_string(e.kind))},
          {"price", e.price ? json(precision.tick_size.format(*e.price)) : json(nullptr)},
          {"size", precision.size_unit.format(e.size)}};
}

}  // namespace

void BackgroundParams::validate() const {
  auto prob = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  prob(cancel_fraction, "cancel_fraction");
  prob(active_fraction, "active_fraction");
  prob(passive_share, "passive_share");
  prob(match_probability, "match_probability");
  prob(quote_move_probability, "quote_move_probability");
  if (match_probability + quote_move_probability > 1.0) {
    throw ConfigError("match_probability + quote_move_probability must not exceed 1");
  }
  if (!(event_rate > 0.0)) throw ConfigError("event_rate must be positive");
  if (!(duration_s > 0.0)) throw ConfigError("duration must be positive");
  if (!(mean_lifetime_s > 0.0)) throw ConfigError("mean lifetime must be positive");
  if (!base_quotes.valid()) throw ConfigError("base quotes must satisfy 0 < bid < ask");
  if (alpha <= 0) throw ConfigError("alpha must be positive");
  if (max_drift < 0) throw ConfigError("max_drift must be non-negative");
  if (sizes.min <= 0 || sizes.max < sizes.min || sizes.median <= 0 || sizes.sigma < 0) {
    throw ConfigError("invalid size distribution");
  }
  if (anchor_size < 0) throw ConfigError("anchor_size must be non-negative");
}

std::vector<Event> gen_background(const BackgroundParams& params) {
  params.validate();
  return BackgroundGenerator(params).run();
}

void SpoofSpec::validate() const {
  if (size <= 0) throw InjectionError("spoof size must be positive");
  if (cancel_ts <= submit_ts) throw InjectionError("cancel_ts must be later than submit_ts");
  if (style == SpoofStyle::Layered && levels < 2) throw InjectionError("layered spoofing needs at least two levels");
  if (style == SpoofStyle::Layered && level_gap <= 0) throw InjectionError("layered spoofing needs a positive level gap");
  if (!level_submit_ts.empty()) {
    if (level_submit_ts.size() != level_count()) throw InjectionError("level_submit_ts must give one time per level");
    for (Micros t : level_submit_ts) {
      if (t >= cancel_ts) throw InjectionError("every level must be submitted before cancel_ts");
    }
  }
  if (price && *price <= 0) throw InjectionError("spoof price must be positive");
  if (id_prefix.empty()) throw InjectionError("id_prefix must not be empty");
}

Injection inject_spoof(std::span<const Event> stream, const SpoofSpec& spec, const AreaConfig& cfg) {
  spec.validate();
  if (stream.empty()) throw InjectionError("cannot inject into an empty stream");
  const Micros first = stream.front().ts;
  const Micros last = stream.back().ts;
  std::vector<Micros> submit_times = spec.level_submit_ts;
  if (submit_times.empty()) submit_times.assign(spec.level_count(), spec.submit_ts);
  for (Micros t : submit_times) {
    if (t < first || t > last) throw InjectionError("submit time " + format_timestamp(t) + " outside the stream span");
  }
  if (spec.cancel_ts < first || spec.cancel_ts > last) {
    throw InjectionError("cancel time " + format_timestamp(spec.cancel_ts) + " outside the stream span");
  }

  Injection result;
  Ticks base_price = 0;
  if (spec.price) {
    base_price = *spec.price;
  } else {
    const auto q = quotes_at(stream, submit_times.front());
    if (!q) throw InjectionError("no two-sided quotes at submit time to place an offset spoof");
    const PriceInterval active = active_interval(*q, cfg.alpha);
    base_price = spec.side == Side::Buy ? active.low - spec.price_offset : active.high + spec.price_offset;
  }

  std::unordered_set<std::string_view> ids;
  ids.reserve(stream.size());
  for (const Event& e : stream) ids.insert(e.order_id);
  std::size_t counter = 0;
  auto fresh_id = [&]() {
    std::string id;
    do {
      id = spec.id_prefix + "-" + std::to_string(++counter);
    } while (ids.contains(id));
    return id;
  };

  std::vector<Event> cancels;
  for (std::size_t level = 0; level < spec.level_count(); ++level) {
    const Ticks step = static_cast<Ticks>(level) * spec.level_gap;
    const Ticks price = spec.side == Side::Buy ? base_price - step : base_price + step;
    if (price <= 0) throw InjectionError("spoof level " + std::to_string(level + 1) + " has a non-positive price");
    const std::string id = fresh_id();
    const Micros at = submit_times[level];

    if (const auto q = quotes_at(stream, at)) {
      if (classify_area(price, *q, cfg.alpha) != Area::Passive) {
        result.warnings.push_back("level " + std::to_string(level + 1) + " at " + cfg.tick_size.format(price) +
                                  " is not in the passive area at " + format_timestamp(at));
      }
    } else {
      result.warnings.push_back("no two-sided quotes at " + format_timestamp(at) + " to check level placement");
    }
    result.injected.push_back(Event{at, id, Action::Submit, spec.side, OrderKind::Limit, price, spec.size});
    cancels.push_back(Event{spec.cancel_ts, id, Action::Cancel, spec.side, OrderKind::Limit, price, spec.size});
  }
  result.injected.insert(result.injected.end(), cancels.begin(), cancels.end());
  std::stable_sort(result.injected.begin(), result.injected.end(),
                   [](const Event& a, const Event& b) { return a.ts < b.ts; });

  result.stream.reserve(stream.size() + result.injected.size());
  std::merge(stream.begin(), stream.end(), result.injected.begin(), result.injected.end(),
             std::back_inserter(result.stream), [](const Event& a, const Event& b) { return a.ts < b.ts; });
  return result;
}

SpoofSpec parse_spoof_spec(std::string_view json_text, const Precision& precision) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InjectionError(std::string("invalid spoof spec JSON: ") + e.what());
  }
  if (!j.is_object()) throw InjectionError("spoof spec must be a JSON object");
  try {
    SpoofSpec spec;
    const std::string style = j.value("style", "traditional");
    if (style == "traditional") {
      spec.style = SpoofStyle::Traditional;
    } else if (style == "layered") {
      spec.style = SpoofStyle::Layered;
    } else {
      throw InjectionError("unknown spoof style '" + style + "'");
    }
    spec.levels = j.value("levels", spec.style == SpoofStyle::Layered ? 2 : 1);
    if (j.contains("level_gap")) spec.level_gap = decimal_ticks(j, "level_gap", precision.tick_size);
    if (j.contains("level_gap_ticks")) spec.level_gap = j.at("level_gap_ticks").get<Ticks>();
    const std::string side = j.value("side", "buy");
    const auto parsed_side = parse_side(side);
    if (!parsed_side) throw InjectionError("unknown side '" + side + "'");
    spec.side = *parsed_side;
    if (j.contains("price")) spec.price = decimal_ticks(j, "price", precision.tick_size);
    if (j.contains("price_offset")) spec.price_offset = j.at("price_offset").get<Ticks>();
    if (!j.contains("price") && !j.contains("price_offset")) throw InjectionError("spec needs price or price_offset");
    spec.size = decimal_ticks(j, "size", precision.size_unit);
    spec.submit_ts = spec_time(j.at("submit_ts"), "submit_ts");
    spec.cancel_ts = spec_time(j.at("cancel_ts"), "cancel_ts");
    if (j.contains("level_submit_ts")) {
      for (const auto& t : j.at("level_submit_ts")) spec.level_submit_ts.push_back(spec_time(t, "level_submit_ts"));
      if (!spec.level_submit_ts.empty()) spec.submit_ts = spec.level_submit_ts.front();
    }
    spec.id_prefix = j.value("id_prefix", spec.id_prefix);
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw InjectionError(std::string("invalid spoof spec: ") + e.what());
  }
}

std::string labels_json(std::span<const Injection> injections, const Precision& precision) {
  json doc;
  doc["injections"] = json::array();
  for (const Injection& inj : injections) {
    json item;
    std::vector<std::string> ids;
    json events = json::array();
    for (const Event& e : inj.injected) {
      if (std::find(ids.begin(), ids.end(), e.order_id) == ids.end()) ids.push_back(e.order_id);
      events.push_back(event_json(e, precision));
    }
    item["order_ids"] = ids;
    item["events"] = events;
    item["warnings"] = inj.warnings;
    doc["injections"].push_back(item);
  }
  return doc.dump(2);
}

MarketProfile luna_profile() {
  MarketProfile p;
  p.name = "luna";
  p.area = AreaConfig{50, 100'000, DecimalScale(1, 2), DecimalScale(1, 3)};
  p.background.start = 18 * 3600 * kMicrosPerSecond + 30 * 60 * kMicrosPerSecond;
  p.background.duration_s = 600.0;
  p.background.base_quotes = Quotes{174, 175};
  p.background.alpha = 50;
  p.background.event_rate = 50.0;
  p.background.sizes = SizeDistribution{20'000, 1.0, 1, 200'000};
  return p;
}

MarketProfile btc_profile() {
  MarketProfile p;
  p.name = "btc";
  p.area = AreaConfig{10'000, 100'000, DecimalScale(1, 2), DecimalScale(1, 5)};
  p.background.start = 23 * 3600 * kMicrosPerSecond;
  p.background.duration_s = 600.0;
  p.background.base_quotes = Quotes{4'146'686, 4'146'688};
  p.background.alpha = 10'000;
  p.background.event_rate = 200.0;
  p.background.sizes = SizeDistribution{5'000, 1.5, 1, 500'000};
  return p;
}

std::optional<MarketProfile> profile_by_name(std::string_view name) {
  if (name == "luna") return luna_profile();
  if (name == "btc") return btc_profile();
  return std::nullopt;
}

}  // namespace lobm
