#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include <json.hpp>

#include "lobm/book.hpp"
#include "lobm/error.hpp"
#include "lobm/momentum.hpp"
#include "lobm/synth.hpp"
#include "lobm/time.hpp"

using namespace lobm;

namespace {

BackgroundParams short_luna(std::uint64_t seed, double seconds = 120) {
  BackgroundParams p = luna_profile().background;
  p.seed = seed;
  p.duration_s = seconds;
  return p;
}

SpoofSpec table_1a() {
  SpoofSpec s;
  s.side = Side::Buy;
  s.price = 114;
  s.size = 100'000'000;
  s.submit_ts = parse_timestamp("18:36:13.59");
  s.cancel_ts = parse_timestamp("18:38:16.02");
  return s;
}

}  // namespace

TEST(Background, Deterministic) {
  EXPECT_EQ(gen_background(short_luna(7)), gen_background(short_luna(7)));
  EXPECT_NE(gen_background(short_luna(7)), gen_background(short_luna(8)));
}

TEST(Background, SortedAndReplayable) {
  BackgroundParams p = short_luna(3);
  p.quote_move_probability = 0.01;
  const auto events = gen_background(p);
  EXPECT_TRUE(std::is_sorted(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.ts < b.ts; }));
  BookState strict(ReplayMode::Strict);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    ASSERT_TRUE(well_formed(e));
    ASSERT_NO_THROW(strict.apply(e));
    // the two opening anchors establish both sides
    if (i >= 1) ASSERT_TRUE(strict.quotes()) << "book lost a side at " << format_timestamp(e.ts);
  }
}

TEST(Background, HonoursMixFractions) {
  BackgroundParams p = luna_profile().background;
  p.seed = 99;
  p.duration_s = 1200;  // about 1.2e5 events
  const auto events = gen_background(p);
  ASSERT_GT(events.size(), 100'000u);
  BookState book;
  std::size_t in_active = 0, considered = 0, opens = 0, cancels = 0;
  for (const Event& e : events) {
    const auto q = book.quotes();
    if (q && e.action != Action::Match && e.kind == OrderKind::Limit && e.order_id.rfind("bg-", 0) == 0) {
      ++considered;
      if (classify_area(*e.price, *q, p.alpha) == Area::Active) ++in_active;
      if (e.action == Action::Submit) ++opens;
      if (e.action == Action::Cancel) ++cancels;
    }
    book.apply(e);
  }
  const double active_share = static_cast<double>(in_active) / static_cast<double>(considered);
  const double cancel_share = static_cast<double>(cancels) / static_cast<double>(opens);
  EXPECT_GE(active_share, 0.96);
  EXPECT_LE(active_share, 0.98);
  EXPECT_GE(cancel_share, 0.976);
  EXPECT_LE(cancel_share, 0.996);
}

TEST(Background, RejectsBadParams) {
  BackgroundParams p;
  p.cancel_fraction = 1.5;
  EXPECT_THROW(p.validate(), ConfigError);
  p = BackgroundParams{};
  p.event_rate = 0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Inject, TraditionalAddsTwoEvents) {
  const auto bg = gen_background(short_luna(1, 600));
  const auto inj = inject_spoof(bg, table_1a(), luna_profile().area);
  ASSERT_EQ(inj.injected.size(), 2u);
  EXPECT_EQ(inj.stream.size(), bg.size() + 2);
  EXPECT_TRUE(std::is_sorted(inj.stream.begin(), inj.stream.end(),
                             [](const Event& a, const Event& b) { return a.ts < b.ts; }));
  EXPECT_EQ(inj.injected[0].order_id.rfind("synthetic-", 0), 0u);
  EXPECT_TRUE(inj.warnings.empty());
  // removing the injected ids gives back the background exactly
  std::vector<Event> rest;
  for (const Event& e : inj.stream) {
    if (e.order_id != inj.injected[0].order_id) rest.push_back(e);
  }
  EXPECT_EQ(rest, bg);
}

TEST(Inject, LayeredAddsEightEvents) {
  const auto bg = gen_background(short_luna(2, 600));
  SpoofSpec s = table_1a();
  s.style = SpoofStyle::Layered;
  s.levels = 4;
  s.level_gap = 8;
  s.price = 120;
  s.size = 50'000'000;
  s.level_submit_ts = {parse_timestamp("18:36:13.59"), parse_timestamp("18:36:14.44"), parse_timestamp("18:36:15.38"),
                       parse_timestamp("18:36:16.23")};
  const auto inj = inject_spoof(bg, s, luna_profile().area);
  ASSERT_EQ(inj.injected.size(), 8u);
  std::map<Ticks, int> per_level;
  for (const Event& e : inj.injected) per_level[*e.price]++;
  EXPECT_EQ(per_level, (std::map<Ticks, int>{{96, 2}, {104, 2}, {112, 2}, {120, 2}}));
}

TEST(Inject, BtcSpecAndErrors) {
  MarketProfile btc = btc_profile();
  btc.background.duration_s = 1500;
  btc.background.event_rate = 20;
  const auto bg = gen_background(btc.background);
  SpoofSpec s;
  s.price = 4'133'400;
  s.size = 4'000'000;
  s.submit_ts = parse_timestamp("23:23:22.81");
  s.cancel_ts = parse_timestamp("23:24:42.68");
  const auto inj = inject_spoof(bg, s, btc.area);
  EXPECT_EQ(inj.injected.size(), 2u);
  EXPECT_TRUE(inj.warnings.empty());

  SpoofSpec late = s;
  late.submit_ts = parse_timestamp("23:59:00");
  late.cancel_ts = parse_timestamp("23:59:30");
  EXPECT_THROW(inject_spoof(bg, late, btc.area), InjectionError);
  SpoofSpec backwards = s;
  backwards.cancel_ts = s.submit_ts;
  EXPECT_THROW(inject_spoof(bg, backwards, btc.area), InjectionError);
}

TEST(Inject, WarnsOutsidePassiveArea) {
  const auto bg = gen_background(short_luna(1, 600));
  SpoofSpec s = table_1a();
  s.price = 170;
  EXPECT_FALSE(inject_spoof(bg, s, luna_profile().area).warnings.empty());
}

TEST(Inject, PriceOffsetFromActiveEdge) {
  const auto bg = gen_background(short_luna(1, 600));
  SpoofSpec s = table_1a();
  s.price.reset();
  s.price_offset = 10;
  const auto inj = inject_spoof(bg, s, luna_profile().area);
  EXPECT_EQ(inj.injected[0].price, 124 - 10);
}

TEST(Inject, SpecJson) {
  const Precision luna{DecimalScale(1, 2), DecimalScale(1, 3)};
  const SpoofSpec s = parse_spoof_spec(R"({"style":"layered","levels":4,"level_gap":"0.08","side":"buy",
      "price":"1.20","size":"50000","submit_ts":"18:36.13.59","cancel_ts":"18:38.16.02"})", luna);
  EXPECT_EQ(s.style, SpoofStyle::Layered);
  EXPECT_EQ(s.level_gap, 8);
  EXPECT_EQ(s.price, 120);
  EXPECT_EQ(s.size, 50'000'000);
  EXPECT_EQ(s.submit_ts, parse_timestamp("18:36:13.59"));
  EXPECT_THROW(parse_spoof_spec(R"({"style":"layered","levels":1,"size":"1","submit_ts":"1:00:00","cancel_ts":"1:00:01"})", luna),
               InjectionError);
}

TEST(Inject, LabelsListInjectedIds) {
  const auto bg = gen_background(short_luna(1, 600));
  std::vector<Injection> inj{inject_spoof(bg, table_1a(), luna_profile().area)};
  const auto doc = nlohmann::json::parse(labels_json(inj, Precision{}));
  ASSERT_EQ(doc["injections"].size(), 1u);
  EXPECT_EQ(doc["injections"][0]["order_ids"][0], inj[0].injected[0].order_id);
  EXPECT_EQ(doc["injections"][0]["events"].size(), 2u);
}

TEST(Profiles, Lookup) {
  EXPECT_EQ(profile_by_name("luna")->area.alpha, 50);
  EXPECT_EQ(profile_by_name("btc")->area.alpha, 10'000);
  EXPECT_FALSE(profile_by_name("doge"));
}
