#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lobm/error.hpp"
#include "lobm/ingest.hpp"

using namespace lobm;

namespace {

const Precision kLuna{DecimalScale(1, 2), DecimalScale(1, 3)};

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(ExchangeFeed, OpenBecomesLimitSubmit) {
  FeedSkips skips;
  const auto e = parse_exchange_feed(
      R"({"type":"open","time":"2022-05-11T16:05:00Z","order_id":"o","price":"1.62","remaining_size":"111939.762","side":"buy"})",
      kLuna, skips);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->action, Action::Submit);
  EXPECT_EQ(e->kind, OrderKind::Limit);
  EXPECT_EQ(e->side, Side::Buy);
  EXPECT_EQ(e->price, 162);
  EXPECT_EQ(e->size, 111'939'762);
}

TEST(ExchangeFeed, CanceledDoneBecomesCancel) {
  FeedSkips skips;
  const auto e = parse_exchange_feed(
      R"({"type":"done","time":"2022-05-11T16:05:00Z","order_id":"o","price":"1.62","remaining_size":"111939.762","side":"buy","reason":"canceled"})",
      kLuna, skips);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->action, Action::Cancel);
  EXPECT_EQ(e->size, 111'939'762);
}

TEST(ExchangeFeed, NonBookMessagesAreCountedSkips) {
  FeedSkips skips;
  EXPECT_FALSE(parse_exchange_feed(R"({"type":"received","time":"2022-05-11T16:05:00Z","order_id":"o"})", kLuna, skips));
  EXPECT_FALSE(parse_exchange_feed(
      R"({"type":"done","time":"2022-05-11T16:05:00Z","order_id":"o","reason":"filled","side":"buy"})", kLuna, skips));
  EXPECT_FALSE(parse_exchange_feed(R"({"type":"something_new"})", kLuna, skips));
  EXPECT_EQ(skips.total(), 3u);
  EXPECT_EQ(skips.by_reason.at("received"), 1u);
  EXPECT_EQ(skips.by_reason.at("done:filled"), 1u);
}

TEST(ExchangeFeed, SchemaViolationsThrow) {
  FeedSkips skips;
  EXPECT_THROW(parse_exchange_feed("{not json", kLuna, skips), ParseError);
  EXPECT_THROW(parse_exchange_feed(R"({"type":"open","time":"2022-05-11T16:05:00Z","side":"buy"})", kLuna, skips),
               ParseError);
}

TEST(ExchangeFeed, GoldenFile) {
  ReadOptions opt;
  opt.format = Format::ExchangeJsonl;
  opt.precision = kLuna;
  const auto r = read_events(std::string(LOBM_TEST_DATA_DIR) + "/exchange_full_channel.jsonl", opt);
  std::ostringstream out;
  write_events(out, r.events, Format::CanonicalCsv, kLuna);
  EXPECT_EQ(out.str(), slurp(std::string(LOBM_TEST_DATA_DIR) + "/exchange_full_channel.expected.csv"));
  EXPECT_EQ(r.stats.total_records, 10u);
  EXPECT_EQ(r.stats.skips.total(), 4u);
  EXPECT_EQ(r.stats.skips.by_reason.at("change"), 1u);
  EXPECT_EQ(r.stats.skips.by_reason.at("heartbeat"), 1u);
}
