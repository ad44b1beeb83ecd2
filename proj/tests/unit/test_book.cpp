#include <gtest/gtest.h>

#include <random>

#include "lobm/book.hpp"
#include "lobm/error.hpp"
#include "oracle/momentum_oracle.hpp"
#include "support/random_stream.hpp"

using namespace lobm;

namespace {

Event submit(Micros ts, std::string id, Side side, Ticks price, Units size) {
  return Event{ts, std::move(id), Action::Submit, side, OrderKind::Limit, price, size};
}

Event cancel(Micros ts, std::string id, Side side, Ticks price, Units size) {
  return Event{ts, std::move(id), Action::Cancel, side, OrderKind::Limit, price, size};
}

}  // namespace

TEST(Book, SingleOrderAndCancel) {
  BookState b;
  b.apply(submit(0, "a", Side::Buy, 100, 10));
  EXPECT_EQ(b.best_bid(), 100);
  EXPECT_FALSE(b.best_ask());
  EXPECT_FALSE(b.quotes());
  b.apply(cancel(1, "a", Side::Buy, 100, 10));
  EXPECT_FALSE(b.best_bid());
  EXPECT_EQ(b.resting_count(), 0u);
}

TEST(Book, MatchReducesRestingOrder) {
  BookState b;
  b.apply(submit(0, "a", Side::Buy, 100, 10));
  b.apply(Event{1, "a", Action::Match, Side::Sell, OrderKind::Market, 100, 4});
  ASSERT_NE(b.find("a"), nullptr);
  EXPECT_EQ(b.find("a")->remaining, 6);
  EXPECT_EQ(b.best_bid(), 100);
}

TEST(Book, DepthCounts) {
  BookState b;
  b.apply(submit(0, "a", Side::Buy, 100, 1));
  b.apply(submit(0, "b", Side::Buy, 100, 1));
  b.apply(submit(0, "c", Side::Sell, 105, 1));
  EXPECT_EQ(b.depth_count(100), 2u);
  std::size_t total = 0;
  for (const auto& [p, n] : b.depth_counts()) total += n;
  EXPECT_EQ(total, b.resting_count());
  EXPECT_EQ(b.quotes(), (Quotes{100, 105}));
}

TEST(Book, StrictModeRejectsUnknownIds) {
  BookState strict(ReplayMode::Strict);
  EXPECT_THROW(strict.apply(cancel(0, "ghost", Side::Buy, 1, 1)), ConsistencyError);
  BookState lenient;
  lenient.apply(cancel(0, "ghost", Side::Buy, 1, 1));
  EXPECT_EQ(lenient.counters().unknown_cancels, 1u);
}

TEST(Book, CrossedBookHasNoQuotes) {
  BookState b;
  b.apply(submit(0, "a", Side::Buy, 110, 1));
  b.apply(submit(0, "b", Side::Sell, 105, 1));
  EXPECT_FALSE(b.quotes());
}

TEST(Book, IncrementalReplayMatchesRebuild) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 30; ++round) {
    const auto s = testsupport::random_stream(rng, {.max_events = 300});
    BookState inc;
    for (std::size_t i = 0; i < s.events.size(); ++i) {
      inc = apply_event(inc, s.events[i]);
      if (i % 7 != 0) continue;
      oracle::Book rebuilt;
      for (std::size_t j = 0; j <= i; ++j) rebuilt.apply(s.events[j]);
      ASSERT_EQ(inc.resting_count(), rebuilt.orders.size());
      for (const auto& [id, o] : rebuilt.orders) {
        const RestingOrder* r = inc.find(id);
        ASSERT_NE(r, nullptr);
        EXPECT_EQ(r->price, o.price);
        EXPECT_EQ(r->remaining, o.remaining);
      }
      EXPECT_EQ(inc.quotes(), rebuilt.quotes());
    }
  }
}

TEST(Bucketize, TwoEventsTwoBuckets) {
  const std::vector<Event> ev{submit(50'000, "a", Side::Buy, 100, 1), submit(150'000, "b", Side::Sell, 105, 1)};
  AreaConfig cfg;
  const auto r = bucketize(ev, cfg, Quotes{99, 106});
  ASSERT_EQ(r.buckets.size(), 2u);
  EXPECT_EQ(r.buckets[0].end, 100'000);
  EXPECT_EQ(r.buckets[1].end, 200'000);
  EXPECT_EQ(r.buckets[0].events.size(), 1u);
  EXPECT_EQ(r.buckets[1].events.size(), 1u);
  EXPECT_EQ(r.buckets[0].ref_quotes, (Quotes{99, 106}));
  // after "a" only the bid side exists
  EXPECT_FALSE(r.buckets[1].ref_quotes);
  EXPECT_EQ(r.unclassifiable, 1u);
}

TEST(Bucketize, EmptyAndSingleBucket) {
  AreaConfig cfg;
  EXPECT_TRUE(bucketize({}, cfg, std::nullopt).buckets.empty());
  const std::vector<Event> ev{submit(10, "a", Side::Buy, 100, 1), submit(90'000, "b", Side::Sell, 105, 1)};
  const auto r = bucketize(ev, cfg, Quotes{1, 2});
  ASSERT_EQ(r.buckets.size(), 1u);
  EXPECT_EQ(r.buckets[0].ref_quotes, (Quotes{1, 2}));
  EXPECT_THROW(bucketize(ev, cfg, std::nullopt), ConfigError);
}

TEST(Bucketize, BoundaryBelongsToEarlierBucket) {
  AreaConfig cfg;
  const std::vector<Event> ev{submit(100'000, "a", Side::Buy, 100, 1), submit(100'001, "b", Side::Sell, 105, 1)};
  const auto r = bucketize(ev, cfg, Quotes{99, 106});
  ASSERT_EQ(r.buckets.size(), 2u);
  EXPECT_EQ(r.buckets[0].end, 100'000);
  EXPECT_EQ(r.buckets[1].end, 200'000);
}

TEST(Bucketize, EmptyBucketsCarryQuotes) {
  AreaConfig cfg;
  const std::vector<Event> ev{submit(0, "a", Side::Buy, 100, 1), submit(0, "b", Side::Sell, 105, 1),
                              submit(1'000'000, "c", Side::Buy, 101, 1)};
  const auto r = bucketize(ev, cfg, Quotes{100, 105});
  ASSERT_EQ(r.buckets.size(), 11u);
  for (std::size_t i = 1; i < r.buckets.size(); ++i) {
    EXPECT_EQ(r.buckets[i].end - r.buckets[i - 1].end, cfg.dt);
    EXPECT_EQ(r.buckets[i].ref_quotes, (Quotes{100, 105}));
  }
}

TEST(Bucketize, ConcatenationPreservesStream) {
  std::mt19937_64 rng(5);
  AreaConfig cfg;
  for (int round = 0; round < 20; ++round) {
    const auto s = testsupport::random_stream(rng, {});
    const auto r = bucketize(s.events, cfg, s.initial);
    std::vector<Event> joined;
    for (const Bucket& b : r.buckets) {
      for (const Event& e : b.events) {
        EXPECT_GT(e.ts, b.start());
        EXPECT_LE(e.ts, b.end);
        joined.push_back(e);
      }
    }
    EXPECT_EQ(joined, s.events);
  }
}

TEST(Bucketize, RejectsUnsortedInput) {
  AreaConfig cfg;
  const std::vector<Event> ev{submit(500, "a", Side::Buy, 100, 1), submit(100, "b", Side::Sell, 105, 1)};
  EXPECT_THROW(bucketize(ev, cfg, Quotes{1, 2}), ContractError);
}

TEST(Bucketize, WarmupQuotes) {
  const std::vector<Event> ev{submit(0, "a", Side::Buy, 100, 1), submit(5, "b", Side::Buy, 101, 1),
                              submit(9, "c", Side::Sell, 104, 1), submit(12, "d", Side::Sell, 103, 1)};
  EXPECT_EQ(warmup_quotes(ev), (Quotes{101, 104}));
  EXPECT_EQ(quotes_at(ev, 12), (Quotes{101, 103}));
  EXPECT_FALSE(warmup_quotes(std::span<const Event>(ev).first(2)));
}
