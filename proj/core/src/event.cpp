#include "lobm/event.hpp"

#include <algorithm>
#include <cctype>

#include "lobm/error.hpp"

namespace lobm {
namespace {

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view to_string(Action a) noexcept {
  switch (a) {
    case Action::Submit: return "open";
    case Action::Cancel: return "cancel";
    case Action::Match: return "match";
  }
  return "?";
}

std::string_view to_string(Side s) noexcept { return s == Side::Buy ? "buy" : "sell"; }

std::string_view to_string(OrderKind k) noexcept { return k == OrderKind::Limit ? "limit" : "market"; }

std::optional<Action> parse_action(std::string_view text) noexcept {
  if (iequals(text, "open") || iequals(text, "submit")) return Action::Submit;
  if (iequals(text, "cancel") || iequals(text, "canceled") || iequals(text, "cancelled")) return Action::Cancel;
  if (iequals(text, "match")) return Action::Match;
  return std::nullopt;
}

std::optional<Side> parse_side(std::string_view text) noexcept {
  if (iequals(text, "buy") || iequals(text, "bid")) return Side::Buy;
  if (iequals(text, "sell") || iequals(text, "ask")) return Side::Sell;
  return std::nullopt;
}

std::optional<OrderKind> parse_kind(std::string_view text) noexcept {
  if (iequals(text, "limit")) return OrderKind::Limit;
  if (iequals(text, "market")) return OrderKind::Market;
  return std::nullopt;
}

bool well_formed(const Event& e) noexcept {
  if (e.size <= 0) return false;
  if (e.price && *e.price <= 0) return false;
  const bool needs_price = e.action == Action::Cancel || (e.action == Action::Submit && e.kind == OrderKind::Limit);
  return !needs_price || e.price.has_value();
}

double midprice_velocity(Midprice prev, Midprice cur, Micros dt) {
  if (dt <= 0) throw ContractError("midprice_velocity: dt must be positive");
  const double half_ticks = static_cast<double>(cur.twice - prev.twice);
  return half_ticks * static_cast<double>(kMicrosPerSecond) / (2.0 * static_cast<double>(dt));
}

void AreaConfig::validate() const {
  if (alpha <= 0) throw ConfigError("alpha must be positive");
  if (dt <= 0) throw ConfigError("dt must be positive");
}

}  // namespace lobm
