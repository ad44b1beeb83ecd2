#include "lobm/book.hpp"

#include <algorithm>

#include "lobm/error.hpp"

namespace lobm {
namespace {

constexpr std::size_t kMaxBuckets = 100'000'000;

template <typename Levels>
void add_level(Levels& levels, Ticks price) {
  ++levels[price];
}

template <typename Levels>
void remove_level(Levels& levels, Ticks price) {
  auto it = levels.find(price);
  if (it != levels.end() && --it->second == 0) levels.erase(it);
}

}  // namespace

void BookState::insert(const std::string& id, const RestingOrder& order) {
  const auto [it, inserted] = orders_.try_emplace(id, order);
  if (!inserted) {
    if (mode_ == ReplayMode::Strict) throw ConsistencyError("duplicate submit of order '" + id + "'");
    ++counters_.duplicate_submits;
    return;
  }
  if (order.side == Side::Buy) {
    add_level(bids_, order.price);
  } else {
    add_level(asks_, order.price);
  }
}

void BookState::reduce(std::unordered_map<std::string, RestingOrder>::iterator it, Units amount) {
  it->second.remaining -= amount;
  if (it->second.remaining > 0) return;
  if (it->second.side == Side::Buy) {
    remove_level(bids_, it->second.price);
  } else {
    remove_level(asks_, it->second.price);
  }
  orders_.erase(it);
}

void BookState::apply(const Event& e) {
  switch (e.action) {
    case Action::Submit:
      if (e.kind == OrderKind::Market) return;
      if (!e.price) throw ContractError("limit submit without price for order '" + e.order_id + "'");
      insert(e.order_id, RestingOrder{e.side, *e.price, e.size});
      return;
    case Action::Cancel: {
      auto it = orders_.find(e.order_id);
      if (it == orders_.end()) {
        if (mode_ == ReplayMode::Strict) throw ConsistencyError("cancel of unknown order '" + e.order_id + "'");
        ++counters_.unknown_cancels;
        return;
      }
      reduce(it, e.size);
      return;
    }
    case Action::Match: {
      auto it = orders_.find(e.order_id);
      if (it == orders_.end()) {
        if (mode_ == ReplayMode::Strict) throw ConsistencyError("match against unknown order '" + e.order_id + "'");
        ++counters_.unknown_matches;
        return;
      }
      reduce(it, e.size);
      return;
    }
  }
}

std::optional<Ticks> BookState::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.begin()->first;
}

std::optional<Ticks> BookState::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.begin()->first;
}

std::optional<Quotes> BookState::quotes() const {
  if (bids_.empty() || asks_.empty()) return std::nullopt;
  const Quotes q{bids_.begin()->first, asks_.begin()->first};
  if (!q.valid()) return std::nullopt;
  return q;
}

std::size_t BookState::depth_count(Ticks price) const {
  std::size_t n = 0;
  if (auto it = bids_.find(price); it != bids_.end()) n += it->second;
  if (auto it = asks_.find(price); it != asks_.end()) n += it->second;
  return n;
}

std::map<Ticks, std::size_t> BookState::depth_counts() const {
  std::map<Ticks, std::size_t> out(asks_.begin(), asks_.end());
  for (const auto& [price, count] : bids_) out[price] += count;
  return out;
}

const RestingOrder* BookState::find(const std::string& order_id) const {
  auto it = orders_.find(order_id);
  return it == orders_.end() ? nullptr : &it->second;
}

BookState apply_event(BookState book, const Event& e) {
  book.apply(e);
  return book;
}

Micros bucket_end_for(Micros ts, Micros dt) noexcept {
  // ceil(ts / dt) * dt, correct for negative ts as well
  Micros q = ts / dt;
  if (ts % dt != 0 && ts > 0) ++q;
  return q * dt;
}

BucketizeResult bucketize(std::span<const Event> events, const AreaConfig& cfg, std::optional<Quotes> initial_quotes,
                          ReplayMode mode) {
  cfg.validate();
  BucketizeResult result;
  if (events.empty()) return result;
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].ts < events[i - 1].ts) throw ContractError("bucketize: stream is not time-sorted");
  }
  if (!initial_quotes) {
    throw ConfigError("initial reference quotes are required for the first bucket");
  }
  if (!initial_quotes->valid()) throw ConfigError("initial reference quotes must satisfy 0 < bid < ask");

  const Micros first_end = bucket_end_for(events.front().ts, cfg.dt);
  const Micros last_end = bucket_end_for(events.back().ts, cfg.dt);
  const auto count = static_cast<std::size_t>((last_end - first_end) / cfg.dt) + 1;
  if (count > kMaxBuckets) {
    throw ConfigError("stream spans " + std::to_string(count) + " buckets; refusing to materialize more than " +
                      std::to_string(kMaxBuckets));
  }
  result.buckets.reserve(count);

  BookState book(mode);
  std::optional<Quotes> ref = initial_quotes;
  std::size_t i = 0;
  for (Micros end = first_end; end <= last_end; end += cfg.dt) {
    const std::size_t begin = i;
    while (i < events.size() && events[i].ts <= end) book.apply(events[i++]);
    Bucket b;
    b.end = end;
    b.dt = cfg.dt;
    b.ref_quotes = ref;
    b.events = events.subspan(begin, i - begin);
    if (i > begin) ref = book.quotes();
    b.close_quotes = ref;
    if (!b.ref_quotes) ++result.unclassifiable;
    result.buckets.push_back(b);
  }
  result.counters = book.counters();
  return result;
}

std::optional<Quotes> warmup_quotes(std::span<const Event> events) {
  BookState book(ReplayMode::Lenient);
  for (const Event& e : events) {
    book.apply(e);
    if (auto q = book.quotes()) return q;
  }
  return std::nullopt;
}

std::optional<Quotes> quotes_at(std::span<const Event> events, Micros at) {
  BookState book(ReplayMode::Lenient);
  for (const Event& e : events) {
    if (e.ts > at) break;
    book.apply(e);
  }
  return book.quotes();
}

}  // namespace lobm
