#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lobm/decimal.hpp"
#include "lobm/event.hpp"

namespace lobm {

enum class Format { CanonicalCsv, CanonicalJsonl, ExchangeJsonl };

std::string_view to_string(Format f) noexcept;
std::optional<Format> parse_format(std::string_view text) noexcept;

/// Tick size and size unit used to convert decimals to integer units.
struct Precision {
  DecimalScale tick_size{1, 2};
  DecimalScale size_unit{1, 3};
};

inline constexpr std::string_view kCanonicalCsvHeader = "ts,order_id,action,side,kind,price,size";

/// Parses one canonical record. Lines starting with '{' are read as JSONL,
/// anything else as CSV. Throws ParseError / PrecisionError carrying `line_no`.
Event parse_canonical(std::string_view line, const Precision& precision, std::size_t line_no = 0);
Event parse_canonical_csv(std::string_view line, const Precision& precision, std::size_t line_no = 0);
Event parse_canonical_jsonl(std::string_view line, const Precision& precision, std::size_t line_no = 0);

std::string serialize_csv(const Event& e, const Precision& precision);
std::string serialize_jsonl(const Event& e, const Precision& precision);

/// Messages of the exchange full channel that produced no Event, by reason
/// ("received", "change", "done:filled", ...).
struct FeedSkips {
  std::map<std::string, std::size_t> by_reason;
  std::size_t total() const noexcept;
};

/// Maps one full-channel message to at most one Event:
/// open -> Submit(Limit), done/canceled -> Cancel, match -> Match (aggressor
/// side = opposite of the maker side, order_id = maker order). Everything else
/// is counted in `skips` and yields nullopt. Throws ParseError on invalid JSON
/// or on a known message type missing a required field.
std::optional<Event> parse_exchange_feed(std::string_view json, const Precision& precision, FeedSkips& skips,
                                         std::size_t line_no = 0);

struct ParseIssue {
  std::size_t line = 0;
  std::string field;
  std::string message;
};

/// Per-file parse accounting. `accepted` counts records that parsed
/// (including exchange messages skipped as non-book-mutating).
struct ParseStats {
  std::size_t total_records = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<ParseIssue> samples;
  FeedSkips skips;

  void merge(const ParseStats& other, std::size_t max_samples);
};

struct ReadOptions {
  Format format = Format::CanonicalCsv;
  Precision precision;
  /// Collect malformed records into ParseStats instead of throwing.
  bool lenient = false;
  std::size_t max_samples = 10;
};

struct ReadResult {
  std::vector<Event> events;
  ParseStats stats;
};

/// Parses newline-separated records. Blank lines, '#' comments and the CSV
/// header are ignored and not counted.
ReadResult parse_events(std::string_view text, const ReadOptions& options);

/// Reads a file; gzip-compressed input is decompressed transparently.
ReadResult read_events(const std::filesystem::path& path, const ReadOptions& options);

/// Writes canonical CSV (with header) or JSONL. ExchangeJsonl is not a write format.
void write_events(std::ostream& out, std::span<const Event> events, Format format, const Precision& precision);
void write_events(const std::filesystem::path& path, std::span<const Event> events, Format format,
                  const Precision& precision);

/// Stable sort by timestamp.
void sort_by_time(std::vector<Event>& events);

struct StreamReport {
  std::size_t total_records = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<ParseIssue> parse_errors;
  std::size_t skipped_messages = 0;
  std::map<std::string, std::size_t> skipped_by_reason;
  std::size_t non_monotone_ts = 0;
  std::size_t dangling_cancels = 0;
  /// Cancels whose price or size disagrees with the open order they refer to.
  std::size_t cancel_mismatches = 0;
  std::size_t opens = 0;
  std::size_t canceled_opens = 0;
  std::array<std::size_t, 3> action_histogram{};  // indexed by Action

  /// Folds in file-level parse accounting (replaces the record counters).
  void absorb(const ParseStats& stats);
};

/// Counts timestamp inversions in the given order, then replays a stably
/// time-sorted copy to match cancels against open submits by order id.
StreamReport validate_stream(std::span<const Event> events);

std::string to_json(const StreamReport& report);

}  // namespace lobm
