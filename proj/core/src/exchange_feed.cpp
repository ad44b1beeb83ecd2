// Adapter for the exchange "full" channel message schema
// (received / open / done / match / change / activate).

#include <json.hpp>

#include "lobm/error.hpp"
#include "lobm/ingest.hpp"

namespace lobm {
namespace {

using nlohmann::json;

std::string required_string(const json& j, const char* key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) throw ParseError(line, key, "missing field");
  if (!it->is_string()) throw ParseError(line, key, "expected a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ParseError(line, key, "expected a string");
  return it->get<std::string>();
}

Side required_side(const json& j, std::size_t line) {
  const std::string text = required_string(j, "side", line);
  const auto side = parse_side(text);
  if (!side) throw ParseError(line, "side", "unknown side '" + text + "'");
  return *side;
}

Micros required_time(const json& j, std::size_t line) {
  const std::string text = required_string(j, "time", line);
  try {
    return parse_timestamp(text);
  } catch (const ParseError& e) {
    throw ParseError(line, "time", e.what());
  }
}

Units to_units(const DecimalScale& scale, const std::string& text, std::size_t line, const char* field) {
  try {
    return scale.to_units(text);
  } catch (const PrecisionError& e) {
    throw PrecisionError(line, field, e.what());
  } catch (const ParseError& e) {
    throw ParseError(line, field, e.what());
  }
}

std::optional<Event> skip(FeedSkips& skips, const std::string& reason) {
  ++skips.by_reason[reason];
  return std::nullopt;
}

}  // namespace

std::optional<Event> parse_exchange_feed(std::string_view text, const Precision& precision, FeedSkips& skips,
                                         std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line, "record", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(line, "record", "expected a JSON object");
  const std::string type = required_string(j, "type", line);

  if (type == "open") {
    Event e;
    e.ts = required_time(j, line);
    e.order_id = required_string(j, "order_id", line);
    e.action = Action::Submit;
    e.side = required_side(j, line);
    e.kind = OrderKind::Limit;
    e.price = to_units(precision.tick_size, required_string(j, "price", line), line, "price");
    e.size = to_units(precision.size_unit, required_string(j, "remaining_size", line), line, "remaining_size");
    if (*e.price <= 0) throw ParseError(line, "price", "price must be positive");
    if (e.size <= 0) return skip(skips, "open:zero_size");
    return e;
  }

  if (type == "done") {
    const std::string reason = required_string(j, "reason", line);
    const Micros ts = required_time(j, line);
    std::string order_id = required_string(j, "order_id", line);
    const Side side = required_side(j, line);
    if (reason != "canceled") return skip(skips, "done:" + reason);
    const auto price = optional_string(j, "price", line);
    const auto remaining = optional_string(j, "remaining_size", line);
    // Market orders and never-rested orders finish without a price.
    if (!price || !remaining) return skip(skips, "done:canceled_unpriced");
    Event e;
    e.ts = ts;
    e.order_id = std::move(order_id);
    e.action = Action::Cancel;
    e.side = side;
    e.kind = OrderKind::Limit;
    e.price = to_units(precision.tick_size, *price, line, "price");
    e.size = to_units(precision.size_unit, *remaining, line, "remaining_size");
    if (*e.price <= 0) throw ParseError(line, "price", "price must be positive");
    if (e.size <= 0) return skip(skips, "done:canceled_zero_size");
    return e;
  }

  if (type == "match") {
    Event e;
    e.ts = required_time(j, line);
    e.order_id = required_string(j, "maker_order_id", line);
    e.action = Action::Match;
    // The feed reports the maker's side; the event carries the aggressor.
    e.side = opposite(required_side(j, line));
    e.kind = OrderKind::Market;
    e.price = to_units(precision.tick_size, required_string(j, "price", line), line, "price");
    e.size = to_units(precision.size_unit, required_string(j, "size", line), line, "size");
    if (*e.price <= 0) throw ParseError(line, "price", "price must be positive");
    if (e.size <= 0) throw ParseError(line, "size", "size must be positive");
    return e;
  }

  return skip(skips, type);
}

}  // namespace lobm
