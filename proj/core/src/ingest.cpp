#include "lobm/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "lobm/error.hpp"

namespace lobm {
namespace {

using nlohmann::json;

Units parse_units(std::string_view text, const DecimalScale& scale, std::size_t line, const char* field) {
  try {
    return scale.to_units(text);
  } catch (const PrecisionError& e) {
    throw PrecisionError(line, field, e.what());
  } catch (const ParseError& e) {
    throw ParseError(line, field, e.what());
  }
}

Micros parse_ts_field(std::string_view text, std::size_t line) {
  try {
    return parse_timestamp(text);
  } catch (const ParseError& e) {
    throw ParseError(line, "ts", e.what());
  }
}

// Shared by the CSV and JSONL readers once the raw fields are extracted.
Event build_event(std::string_view ts, std::string_view order_id, std::string_view action,
                  std::string_view side, std::string_view kind, std::string_view price, std::string_view size,
                  const Precision& precision, std::size_t line) {
  Event e;
  e.ts = parse_ts_field(ts, line);
  if (order_id.empty()) throw ParseError(line, "order_id", "empty order id");
  e.order_id = std::string(order_id);

  const auto a = parse_action(action);
  if (!a) throw ParseError(line, "action", "unknown action '" + std::string(action) + "'");
  e.action = *a;
  const auto s = parse_side(side);
  if (!s) throw ParseError(line, "side", "unknown side '" + std::string(side) + "'");
  e.side = *s;
  const auto k = parse_kind(kind);
  if (!k) throw ParseError(line, "kind", "unknown order kind '" + std::string(kind) + "'");
  e.kind = *k;

  if (!price.empty()) {
    e.price = parse_units(price, precision.tick_size, line, "price");
    if (*e.price <= 0) throw ParseError(line, "price", "price must be positive");
  } else if (e.action == Action::Cancel || (e.action == Action::Submit && e.kind == OrderKind::Limit)) {
    throw ParseError(line, "price", "price required for limit submits and cancels");
  }
  if (size.empty()) throw ParseError(line, "size", "missing size");
  e.size = parse_units(size, precision.size_unit, line, "size");
  if (e.size <= 0) throw ParseError(line, "size", "size must be positive");
  return e;
}

std::string json_scalar_text(const json& v, std::size_t line, const char* field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return v.dump();
  if (v.is_null()) return {};
  throw ParseError(line, field, "expected string or number");
}

std::string_view trim_cr(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
  while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
  return line;
}

}  // namespace

std::string_view to_string(Format f) noexcept {
  switch (f) {
    case Format::CanonicalCsv: return "canonical-csv";
    case Format::CanonicalJsonl: return "canonical-jsonl";
    case Format::ExchangeJsonl: return "exchange-jsonl";
  }
  return "?";
}

std::optional<Format> parse_format(std::string_view text) noexcept {
  if (text == "canonical-csv" || text == "csv") return Format::CanonicalCsv;
  if (text == "canonical-jsonl" || text == "jsonl") return Format::CanonicalJsonl;
  if (text == "exchange-jsonl" || text == "exchange") return Format::ExchangeJsonl;
  return std::nullopt;
}

Event parse_canonical_csv(std::string_view line, const Precision& precision, std::size_t line_no) {
  std::array<std::string_view, 7> fields;
  std::size_t n = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (n == fields.size()) throw ParseError(line_no, "record", "expected 7 fields, got more");
      fields[n++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (n != fields.size()) {
    throw ParseError(line_no, "record", "expected 7 fields, got " + std::to_string(n));
  }
  return build_event(fields[0], fields[1], fields[2], fields[3], fields[4], fields[5], fields[6], precision, line_no);
}

Event parse_canonical_jsonl(std::string_view line, const Precision& precision, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(line_no, "record", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(line_no, "record", "expected a JSON object");
  auto text = [&](const char* key, bool required) -> std::string {
    const auto it = j.find(key);
    if (it == j.end()) {
      if (required) throw ParseError(line_no, key, "missing field");
      return {};
    }
    return json_scalar_text(*it, line_no, key);
  };
  const std::string ts = text("ts", true);
  const std::string id = text("order_id", true);
  const std::string action = text("action", true);
  const std::string side = text("side", true);
  const std::string kind = text("kind", true);
  const std::string price = text("price", false);
  const std::string size = text("size", true);
  return build_event(ts, id, action, side, kind, price, size, precision, line_no);
}

Event parse_canonical(std::string_view line, const Precision& precision, std::size_t line_no) {
  const std::string_view t = trim_cr(line);
  if (!t.empty() && t.front() == '{') return parse_canonical_jsonl(t, precision, line_no);
  return parse_canonical_csv(t, precision, line_no);
}

std::string serialize_csv(const Event& e, const Precision& precision) {
  std::string out = format_timestamp(e.ts);
  out += ',';
  out += e.order_id;
  out += ',';
  out += to_string(e.action);
  out += ',';
  out += to_string(e.side);
  out += ',';
  out += to_string(e.kind);
  out += ',';
  if (e.price) out += precision.tick_size.format(*e.price);
  out += ',';
  out += precision.size_unit.format(e.size);
  return out;
}

std::string serialize_jsonl(const Event& e, const Precision& precision) {
  json j = json::object();
  j["ts"] = format_timestamp(e.ts);
  j["order_id"] = e.order_id;
  j["action"] = std::string(to_string(e.action));
  j["side"] = std::string(to_string(e.side));
  j["kind"] = std::string(to_string(e.kind));
  j["price"] = e.price ? json(precision.tick_size.format(*e.price)) : json(nullptr);
  j["size"] = precision.size_unit.format(e.size);
  return j.dump();
}

std::size_t FeedSkips::total() const noexcept {
  std::size_t n = 0;
  for (const auto& [reason, count] : by_reason) n += count;
  return n;
}

void ParseStats::merge(const ParseStats& other, std::size_t max_samples) {
  total_records += other.total_records;
  accepted += other.accepted;
  rejected += other.rejected;
  for (const auto& issue : other.samples) {
    if (samples.size() >= max_samples) break;
    samples.push_back(issue);
  }
  for (const auto& [reason, count] : other.skips.by_reason) skips.by_reason[reason] += count;
}

ReadResult parse_events(std::string_view text, const ReadOptions& options) {
  ReadResult result;
  FeedSkips& skips = result.stats.skips;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim_cr(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (options.format == Format::CanonicalCsv && line == kCanonicalCsvHeader) continue;

    ++result.stats.total_records;
    try {
      switch (options.format) {
        case Format::CanonicalCsv:
          result.events.push_back(parse_canonical_csv(line, options.precision, line_no));
          break;
        case Format::CanonicalJsonl:
          result.events.push_back(parse_canonical_jsonl(line, options.precision, line_no));
          break;
        case Format::ExchangeJsonl:
          if (auto e = parse_exchange_feed(line, options.precision, skips, line_no)) {
            result.events.push_back(std::move(*e));
          }
          break;
      }
      ++result.stats.accepted;
    } catch (const ParseError& e) {
      if (!options.lenient) throw;
      ++result.stats.rejected;
      if (result.stats.samples.size() < options.max_samples) {
        result.stats.samples.push_back({e.line(), e.field(), e.what()});
      }
    }
  }
  return result;
}

ReadResult read_events(const std::filesystem::path& path, const ReadOptions& options) {
  gzFile file = gzopen(path.string().c_str(), "rb");
  if (file == nullptr) throw IoError("cannot open '" + path.string() + "'");
  gzbuffer(file, 1 << 20);
  std::string text;
  std::vector<char> chunk(1 << 20);
  for (;;) {
    const int n = gzread(file, chunk.data(), static_cast<unsigned>(chunk.size()));
    if (n < 0) {
      int errnum = 0;
      const std::string msg = gzerror(file, &errnum);
      gzclose(file);
      throw IoError("read error on '" + path.string() + "': " + msg);
    }
    if (n == 0) break;
    text.append(chunk.data(), static_cast<std::size_t>(n));
  }
  gzclose(file);
  return parse_events(text, options);
}

void write_events(std::ostream& out, std::span<const Event> events, Format format, const Precision& precision) {
  switch (format) {
    case Format::CanonicalCsv:
      out << kCanonicalCsvHeader << '\n';
      for (const Event& e : events) out << serialize_csv(e, precision) << '\n';
      break;
    case Format::CanonicalJsonl:
      for (const Event& e : events) out << serialize_jsonl(e, precision) << '\n';
      break;
    case Format::ExchangeJsonl:
      throw ConfigError("exchange-jsonl is an input-only format");
  }
}

void write_events(const std::filesystem::path& path, std::span<const Event> events, Format format,
                  const Precision& precision) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_events(out, events, format, precision);
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

void sort_by_time(std::vector<Event>& events) {
  if (std::is_sorted(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.ts < b.ts; })) {
    return;
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.ts < b.ts; });
}

void StreamReport::absorb(const ParseStats& stats) {
  total_records = stats.total_records;
  accepted = stats.accepted;
  rejected = stats.rejected;
  parse_errors = stats.samples;
  skipped_messages = stats.skips.total();
  skipped_by_reason = stats.skips.by_reason;
}

StreamReport validate_stream(std::span<const Event> events) {
  StreamReport report;
  report.total_records = events.size();
  report.accepted = events.size();

  for (std::size_t i = 0; i < events.size(); ++i) {
    ++report.action_histogram[static_cast<std::size_t>(events[i].action)];
    if (i > 0 && events[i].ts < events[i - 1].ts) ++report.non_monotone_ts;
  }

  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return events[a].ts < events[b].ts; });

  struct Open {
    std::optional<Ticks> price;
    Units remaining;
  };
  std::unordered_map<std::string_view, Open> open;
  open.reserve(events.size() / 2 + 1);
  for (std::size_t idx : order) {
    const Event& e = events[idx];
    switch (e.action) {
      case Action::Submit:
        if (e.kind == OrderKind::Limit) {
          ++report.opens;
          open[e.order_id] = Open{e.price, e.size};
        }
        break;
      case Action::Match: {
        auto it = open.find(e.order_id);
        if (it != open.end()) {
          it->second.remaining -= e.size;
          if (it->second.remaining <= 0) open.erase(it);
        }
        break;
      }
      case Action::Cancel: {
        auto it = open.find(e.order_id);
        if (it == open.end()) {
          ++report.dangling_cancels;
          break;
        }
        if (it->second.price != e.price || e.size > it->second.remaining) ++report.cancel_mismatches;
        if (e.size >= it->second.remaining) {
          ++report.canceled_opens;
          open.erase(it);
        } else {
          it->second.remaining -= e.size;
        }
        break;
      }
    }
  }
  return report;
}

std::string to_json(const StreamReport& r) {
  json j;
  j["total_records"] = r.total_records;
  j["accepted"] = r.accepted;
  j["rejected"] = r.rejected;
  json errors = json::array();
  for (const auto& issue : r.parse_errors) {
    errors.push_back({{"line", issue.line}, {"field", issue.field}, {"message", issue.message}});
  }
  j["parse_errors"] = {{"count", r.rejected}, {"samples", errors}};
  j["skipped_messages"] = {{"count", r.skipped_messages}, {"by_reason", r.skipped_by_reason}};
  j["non_monotone_ts"] = r.non_monotone_ts;
  j["dangling_cancels"] = r.dangling_cancels;
  j["cancel_mismatches"] = r.cancel_mismatches;
  j["opens"] = r.opens;
  j["canceled_opens"] = r.canceled_opens;
  j["action_histogram"] = {
      {"Submit", r.action_histogram[static_cast<std::size_t>(Action::Submit)]},
      {"Cancel", r.action_histogram[static_cast<std::size_t>(Action::Cancel)]},
      {"Match", r.action_histogram[static_cast<std::size_t>(Action::Match)]},
  };
  return j.dump(2);
}

}  // namespace lobm
