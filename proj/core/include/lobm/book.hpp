#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lobm/event.hpp"

namespace lobm {

enum class ReplayMode {
  /// Unknown cancels/matches and duplicate submits throw ConsistencyError.
  Strict,
  /// Inconsistent events are ignored and counted.
  Lenient,
};

struct BookCounters {
  std::size_t unknown_cancels = 0;
  std::size_t unknown_matches = 0;
  std::size_t duplicate_submits = 0;

  friend bool operator==(const BookCounters&, const BookCounters&) = default;
};

struct RestingOrder {
  Side side = Side::Buy;
  Ticks price = 0;
  Units remaining = 0;

  friend bool operator==(const RestingOrder&, const RestingOrder&) = default;
};

/// Resting limit orders keyed by id, with per-price order counts N(x, t).
///
/// Recorded matches are replayed as given; the book never matches crossing
/// orders by itself, so a crossed book is possible on inconsistent input and
/// reports no valid quotes.
class BookState {
 public:
  explicit BookState(ReplayMode mode = ReplayMode::Lenient) : mode_(mode) {}

  /// Submit(Limit) rests the order; Submit(Market) leaves the book unchanged;
  /// Cancel removes the order (or reduces it when the cancel size is smaller
  /// than the remaining size); Match reduces the resting order by the matched size.
  void apply(const Event& e);

  std::optional<Ticks> best_bid() const;
  std::optional<Ticks> best_ask() const;
  /// Both sides non-empty and best_bid < best_ask; nullopt otherwise.
  std::optional<Quotes> quotes() const;

  /// Number of resting orders quoted at `price` on either side.
  std::size_t depth_count(Ticks price) const;
  /// Price -> resting order count, both sides combined.
  std::map<Ticks, std::size_t> depth_counts() const;
  std::size_t resting_count() const noexcept { return orders_.size(); }
  const RestingOrder* find(const std::string& order_id) const;

  const BookCounters& counters() const noexcept { return counters_; }
  ReplayMode mode() const noexcept { return mode_; }

  /// Same resting orders (counters and mode are not compared).
  bool same_orders(const BookState& other) const { return orders_ == other.orders_; }

 private:
  void insert(const std::string& id, const RestingOrder& order);
  void reduce(std::unordered_map<std::string, RestingOrder>::iterator it, Units amount);

  ReplayMode mode_;
  std::unordered_map<std::string, RestingOrder> orders_;
  std::map<Ticks, std::size_t, std::greater<>> bids_;
  std::map<Ticks, std::size_t> asks_;
  BookCounters counters_;
};

/// Value-semantics form of BookState::apply.
BookState apply_event(BookState book, const Event& e);

/// One sampling interval (end - dt, end].
///
/// `events` views into the stream passed to bucketize; the stream must outlive
/// the buckets. `ref_quotes` are the quotes frozen for the whole interval (nullopt
/// when the book was one-sided or crossed: the bucket is unclassifiable).
/// `close_quotes` are the quotes after the bucket's last event.
struct Bucket {
  Micros end = 0;
  Micros dt = 0;
  std::optional<Quotes> ref_quotes;
  std::optional<Quotes> close_quotes;
  std::span<const Event> events;

  Micros start() const noexcept { return end - dt; }
  bool classifiable() const noexcept { return ref_quotes.has_value(); }
};

/// Upper edge T of the bucket (T - dt, T] that contains ts, with T a multiple of dt.
Micros bucket_end_for(Micros ts, Micros dt) noexcept;

struct BucketizeResult {
  std::vector<Bucket> buckets;
  BookCounters counters;
  std::size_t unclassifiable = 0;
};

/// Partitions a time-sorted stream into contiguous buckets of width cfg.dt,
/// aligned to multiples of dt. Empty buckets are emitted so the series is
/// uniformly sampled. Each bucket's ref_quotes are the book quotes after the last
/// event of the previous bucket; the first bucket uses `initial_quotes`.
///
/// Throws ContractError on an unsorted stream and ConfigError when
/// `initial_quotes` is missing for a non-empty stream.
BucketizeResult bucketize(std::span<const Event> events, const AreaConfig& cfg, std::optional<Quotes> initial_quotes,
                          ReplayMode mode = ReplayMode::Lenient);

/// First valid two-sided quotes observed while replaying the stream from an
/// empty book; nullopt when the book never becomes two-sided.
std::optional<Quotes> warmup_quotes(std::span<const Event> events);

/// Quotes after replaying every event with ts <= `at` (stream must be sorted).
std::optional<Quotes> quotes_at(std::span<const Event> events, Micros at);

}  // namespace lobm
