#include "lobm/momentum.hpp"

#include <cmath>
#include <limits>

#include "lobm/error.hpp"

namespace lobm {
namespace {

__extension__ using Wide = __int128;

RawMomentum checked_mul(Units size, Ticks displacement) {
  RawMomentum out = 0;
  if (__builtin_mul_overflow(size, displacement, &out)) throw ContractError("momentum overflow");
  return out;
}

RawMomentum checked_add(RawMomentum a, RawMomentum b) {
  RawMomentum out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw ContractError("momentum accumulation overflow");
  return out;
}

Wide pow10(int n) {
  Wide v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

// Maker-side counterpart of a match, modelled as a cancel at the execution price.
std::optional<Event> maker_annihilation(const Event& match) {
  if (!match.price) return std::nullopt;
  Event maker = match;
  maker.action = Action::Cancel;
  maker.side = opposite(match.side);
  maker.kind = OrderKind::Limit;
  return maker;
}

}  // namespace

std::string_view to_string(Area a) noexcept {
  switch (a) {
    case Area::Active: return "active";
    case Area::Passive: return "passive";
    case Area::Outside: return "outside";
  }
  return "?";
}

std::optional<Area> parse_area(std::string_view text) noexcept {
  if (text == "active") return Area::Active;
  if (text == "passive") return Area::Passive;
  if (text == "outside") return Area::Outside;
  return std::nullopt;
}

Area classify_area(Ticks price, const Quotes& q, Ticks alpha) noexcept {
  const Ticks active_low = q.best_bid - alpha;
  const Ticks active_high = q.best_ask + alpha;
  if (price >= active_low && price <= active_high) return Area::Active;
  if (price >= active_low - alpha && price < active_low) return Area::Passive;
  if (price > active_high && price <= active_high + alpha) return Area::Passive;
  return Area::Outside;
}

Ticks effective_price(const Event& e, const Quotes& q) {
  const Ticks opposite_quote = e.side == Side::Buy ? q.best_ask : q.best_bid;
  if (e.action == Action::Match) return opposite_quote;
  if (e.action == Action::Submit && e.kind == OrderKind::Market) return opposite_quote;
  if (!e.price) throw ContractError("unpriced event for order '" + e.order_id + "'");
  const Ticks p = *e.price;
  if (e.side == Side::Buy && p > q.best_ask) return q.best_ask;
  if (e.side == Side::Sell && p < q.best_bid) return q.best_bid;
  return p;
}

Ticks area_bound(Side side, const Quotes& q, Ticks alpha, Area area) {
  if (area == Area::Outside) throw ContractError("no area bound outside the passive area");
  const Ticks depth = area == Area::Active ? alpha : 2 * alpha;
  return side == Side::Buy ? q.best_bid - depth : q.best_ask + depth;
}

Velocity event_velocity(const Event& e, const Quotes& q_ref, Ticks bound, Micros dt) {
  if (dt <= 0) throw ContractError("event_velocity: dt must be positive");
  const Ticks p = effective_price(e, q_ref);
  const Ticks displacement = e.action == Action::Cancel ? bound - p : p - bound;
  return Velocity{displacement, dt};
}

RawMomentum event_momentum(const Event& e, const Quotes& q_ref, const AreaConfig& cfg, Area area) {
  if (area == Area::Outside) throw ContractError("event_momentum called for an Outside event");
  const Ticks bound = area_bound(e.side, q_ref, cfg.alpha, area);
  const Velocity v = event_velocity(e, q_ref, bound, cfg.dt);
  return checked_mul(e.size, v.displacement);
}

bool is_market_contribution(const Event& e, const Quotes& q_ref) {
  switch (e.action) {
    case Action::Match: return true;
    case Action::Cancel: return false;
    case Action::Submit:
      if (e.kind == OrderKind::Market) return true;
      return e.side == Side::Buy ? effective_price(e, q_ref) == q_ref.best_ask
                                 : effective_price(e, q_ref) == q_ref.best_bid;
  }
  return false;
}

MomentumSample bucket_net_momentum(const Bucket& b, const AreaConfig& cfg, Area area, Split split,
                                   const MomentumOptions& options) {
  if (!b.ref_quotes) throw ContractError("bucket_net_momentum: bucket has no reference quotes");
  const Quotes& q = *b.ref_quotes;
  MomentumSample s;
  s.bucket_end = b.end;
  s.area = area;

  auto accumulate = [&](const Event& e, bool market) {
    if (split == Split::Limit && market) return;
    if (split == Split::Market && !market) return;
    if (classify_area(effective_price(e, q), q, cfg.alpha) != area) return;
    const RawMomentum m = event_momentum(e, q, cfg, area);
    if (market) {
      s.m_market = checked_add(s.m_market, m);
    } else {
      s.m_limit = checked_add(s.m_limit, m);
    }
  };

  for (const Event& e : b.events) {
    accumulate(e, is_market_contribution(e, q));
    if (options.match_both_sides && e.action == Action::Match) {
      if (auto maker = maker_annihilation(e)) accumulate(*maker, false);
    }
  }
  s.m_total = checked_add(s.m_limit, s.m_market);
  return s;
}

std::vector<MomentumSample> momentum_series(std::span<const Bucket> buckets, const AreaConfig& cfg, Area area,
                                            Split split, const MomentumOptions& options) {
  std::vector<MomentumSample> out;
  out.reserve(buckets.size());
  for (const Bucket& b : buckets) {
    if (!b.classifiable()) continue;
    out.push_back(bucket_net_momentum(b, cfg, area, split, options));
  }
  return out;
}

std::vector<CumulativeSample> cumulative_series(std::span<const MomentumSample> samples) {
  std::vector<CumulativeSample> out;
  out.reserve(samples.size());
  CumulativeSample acc;
  for (const MomentumSample& s : samples) {
    acc.bucket_end = s.bucket_end;
    acc.cum_limit = checked_add(acc.cum_limit, s.m_limit);
    acc.cum_market = checked_add(acc.cum_market, s.m_market);
    acc.cum_total = checked_add(acc.cum_total, s.m_total);
    out.push_back(acc);
  }
  return out;
}

double momentum_value(RawMomentum raw, const AreaConfig& cfg) noexcept {
  const double per_period = static_cast<double>(raw) * cfg.size_unit.unit_value() * cfg.tick_size.unit_value();
  return per_period * static_cast<double>(kMicrosPerSecond) / static_cast<double>(cfg.dt);
}

std::string format_momentum(RawMomentum raw, const AreaConfig& cfg, int digits) {
  // value = raw * su_m * tk_m * 1e6 / (dt * 10^(su_e + tk_e))
  const Wide num = static_cast<Wide>(raw) * cfg.size_unit.mantissa() * cfg.tick_size.mantissa() * kMicrosPerSecond *
                   pow10(digits);
  const Wide den = static_cast<Wide>(cfg.dt) * pow10(cfg.size_unit.exponent() + cfg.tick_size.exponent());
  const bool negative = num < 0;
  Wide n = negative ? -num : num;
  Wide scaled = n / den;
  if ((n % den) * 2 >= den) ++scaled;  // half away from zero

  const Wide divisor = pow10(digits);
  Wide whole = scaled / divisor;
  Wide frac = scaled % divisor;
  std::string int_part;
  do {
    int_part.insert(int_part.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
    whole /= 10;
  } while (whole > 0);
  std::string frac_part(static_cast<std::size_t>(digits), '0');
  for (int i = digits - 1; i >= 0; --i) {
    frac_part[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(frac % 10));
    frac /= 10;
  }
  while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();
  std::string out = (negative && scaled != 0) ? "-" : "";
  out += int_part;
  if (!frac_part.empty()) out += "." + frac_part;
  return out;
}

}  // namespace lobm
