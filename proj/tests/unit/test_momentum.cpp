#include <gtest/gtest.h>

#include <random>

#include "lobm/book.hpp"
#include "lobm/error.hpp"
#include "lobm/momentum.hpp"
#include "support/random_stream.hpp"

using namespace lobm;

namespace {

const AreaConfig kLuna{50, 100'000, DecimalScale(1, 2), DecimalScale(1, 3)};
const Quotes kQuotes{174, 175};

Event ev(Action a, Side s, OrderKind k, std::optional<Ticks> p, Units size) {
  return Event{0, "x", a, s, k, p, size};
}

}  // namespace

TEST(Area, Classification) {
  EXPECT_EQ(classify_area(162, Quotes{226, 228}, 50), Area::Passive);
  EXPECT_EQ(classify_area(124, kQuotes, 50), Area::Active);
  EXPECT_EQ(classify_area(225, kQuotes, 50), Area::Active);
  EXPECT_EQ(classify_area(123, kQuotes, 50), Area::Passive);
  EXPECT_EQ(classify_area(114, kQuotes, 50), Area::Passive);
  EXPECT_EQ(classify_area(74, kQuotes, 50), Area::Passive);
  EXPECT_EQ(classify_area(73, kQuotes, 50), Area::Outside);
  EXPECT_EQ(classify_area(275, kQuotes, 50), Area::Passive);
  EXPECT_EQ(classify_area(276, kQuotes, 50), Area::Outside);
  EXPECT_EQ(active_interval(kQuotes, 50), (PriceInterval{124, 225}));
}

TEST(Momentum, EffectivePrice) {
  EXPECT_EQ(effective_price(ev(Action::Submit, Side::Buy, OrderKind::Market, std::nullopt, 1), kQuotes), 175);
  EXPECT_EQ(effective_price(ev(Action::Submit, Side::Buy, OrderKind::Limit, 180, 1), kQuotes), 175);
  EXPECT_EQ(effective_price(ev(Action::Submit, Side::Buy, OrderKind::Limit, 160, 1), kQuotes), 160);
  EXPECT_EQ(effective_price(ev(Action::Submit, Side::Sell, OrderKind::Limit, 170, 1), kQuotes), 174);
  EXPECT_EQ(effective_price(ev(Action::Match, Side::Sell, OrderKind::Market, 170, 1), kQuotes), 174);
}

TEST(Momentum, Velocity) {
  const Event at_bound = ev(Action::Submit, Side::Buy, OrderKind::Limit, 124, 1);
  EXPECT_EQ(event_velocity(at_bound, kQuotes, area_bound(Side::Buy, kQuotes, 50, Area::Active), 100'000).displacement, 0);

  const Event spoof = ev(Action::Submit, Side::Buy, OrderKind::Limit, 114, 1);
  const Ticks bound = area_bound(Side::Buy, kQuotes, 50, Area::Passive);
  EXPECT_EQ(bound, 74);
  const Velocity v = event_velocity(spoof, kQuotes, bound, 100'000);
  EXPECT_EQ(v.displacement, 40);
  EXPECT_DOUBLE_EQ(v.ticks_per_second() * 0.01, 4.0);

  Event c = spoof;
  c.action = Action::Cancel;
  EXPECT_EQ(event_velocity(c, kQuotes, bound, 100'000).displacement, -40);

  Event sell = ev(Action::Submit, Side::Sell, OrderKind::Limit, 260, 1);
  EXPECT_EQ(event_velocity(sell, kQuotes, area_bound(Side::Sell, kQuotes, 50, Area::Passive), 100'000).displacement,
            260 - 275);
}

TEST(Momentum, TableSpoofMomentum) {
  const Event submit{0, "oid-1", Action::Submit, Side::Buy, OrderKind::Limit, 114, 100'000'000};
  Event cancel = submit;
  cancel.action = Action::Cancel;
  const RawMomentum m = event_momentum(submit, kQuotes, kLuna, Area::Passive);
  EXPECT_EQ(format_momentum(m, kLuna), "400000");
  EXPECT_EQ(format_momentum(event_momentum(cancel, kQuotes, kLuna, Area::Passive), kLuna), "-400000");
  EXPECT_DOUBLE_EQ(momentum_value(m, kLuna), 400000.0);
  EXPECT_THROW(event_momentum(submit, kQuotes, kLuna, Area::Outside), ContractError);
}

TEST(Momentum, BucketSums) {
  std::vector<Event> events{{10, "s", Action::Submit, Side::Buy, OrderKind::Limit, 114, 100'000'000}};
  Bucket b{100'000, 100'000, kQuotes, kQuotes, events};
  const MomentumSample s = bucket_net_momentum(b, kLuna, Area::Passive);
  EXPECT_EQ(format_momentum(s.m_limit, kLuna), "400000");
  EXPECT_EQ(s.m_market, 0);
  EXPECT_EQ(s.m_total, s.m_limit);
  EXPECT_EQ(bucket_net_momentum(b, kLuna, Area::Active).m_total, 0);

  events.push_back({20, "s", Action::Cancel, Side::Buy, OrderKind::Limit, 114, 100'000'000});
  b.events = events;
  EXPECT_EQ(bucket_net_momentum(b, kLuna, Area::Passive).m_total, 0);
}

TEST(Momentum, MarketSplit) {
  const std::vector<Event> events{
      {1, "a", Action::Submit, Side::Buy, OrderKind::Limit, 170, 5},
      {2, "b", Action::Submit, Side::Buy, OrderKind::Limit, 176, 5},
      {3, "c", Action::Submit, Side::Sell, OrderKind::Market, std::nullopt, 5},
      {4, "d", Action::Match, Side::Buy, OrderKind::Market, 175, 5},
  };
  Bucket b{100'000, 100'000, kQuotes, kQuotes, events};
  const MomentumSample both = bucket_net_momentum(b, kLuna, Area::Active);
  // limit buy @170: 5*(170-124); crossing buy @175: 5*(175-124); market sell @174: 5*(174-225); match buy @175
  EXPECT_EQ(both.m_limit, 5 * 46);
  EXPECT_EQ(both.m_market, 5 * 51 + 5 * (174 - 225) + 5 * 51);
  EXPECT_EQ(bucket_net_momentum(b, kLuna, Area::Active, Split::Limit).m_total, both.m_limit);
  EXPECT_EQ(bucket_net_momentum(b, kLuna, Area::Active, Split::Market).m_total, both.m_market);

  // resting side of the match annihilates as a sell cancel at 1.75
  const MomentumSample two = bucket_net_momentum(b, kLuna, Area::Active, Split::Both, {true});
  EXPECT_EQ(two.m_limit - both.m_limit, 5 * (225 - 175));
}

TEST(Momentum, AntisymmetryProperty) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<Ticks> quote(100, 10'000), spread(1, 20), alpha(1, 500), size(1, 1'000'000);
  int checked = 0;
  for (int i = 0; i < 20'000; ++i) {
    const Ticks b = quote(rng);
    const Quotes q{b, b + spread(rng)};
    AreaConfig cfg = kLuna;
    cfg.alpha = alpha(rng);
    const Ticks p = std::uniform_int_distribution<Ticks>(std::max<Ticks>(1, b - 3 * cfg.alpha), q.best_ask + 3 * cfg.alpha)(rng);
    const Side side = i % 2 ? Side::Buy : Side::Sell;
    const Event s{0, "x", Action::Submit, side, OrderKind::Limit, p, size(rng)};
    Event c = s;
    c.action = Action::Cancel;
    const Area area = classify_area(effective_price(s, q), q, cfg.alpha);
    if (area == Area::Outside) continue;
    ++checked;
    ASSERT_EQ(event_momentum(s, q, cfg, area) + event_momentum(c, q, cfg, area), 0);
  }
  EXPECT_GT(checked, 10'000);
}

TEST(Momentum, ScaleCovariance) {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 20; ++round) {
    auto s = testsupport::random_stream(rng, {.max_events = 300});
    AreaConfig cfg = kLuna;
    cfg.alpha = 20;
    const auto base = bucketize(s.events, cfg, s.initial);
    const auto m1 = momentum_series(base.buckets, cfg, Area::Active);
    auto scaled = s.events;
    for (Event& e : scaled) e.size *= 3;
    const auto b3 = bucketize(scaled, cfg, s.initial);
    const auto m3 = momentum_series(b3.buckets, cfg, Area::Active);
    ASSERT_EQ(m1.size(), m3.size());
    for (std::size_t i = 0; i < m1.size(); ++i) {
      EXPECT_EQ(m3[i].m_limit, 3 * m1[i].m_limit);
      EXPECT_EQ(m3[i].m_market, 3 * m1[i].m_market);
    }
  }
}

TEST(Momentum, Cumulative) {
  std::vector<MomentumSample> s{{1, Area::Active, 1, 0, 1}, {2, Area::Active, 0, 2, 2}, {3, Area::Active, 3, 0, 3}};
  const auto c = cumulative_series(s);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].cum_total, 1);
  EXPECT_EQ(c[1].cum_total, 3);
  EXPECT_EQ(c[2].cum_total, 6);
  EXPECT_EQ(c[2].cum_limit, 4);
  EXPECT_EQ(c[2].cum_market, 2);
}

TEST(Momentum, Formatting) {
  // 1 unit-tick over 0.1 s is 0.01*0.001/0.1 = 0.0001
  EXPECT_EQ(format_momentum(1, kLuna), "0.0001");
  EXPECT_EQ(format_momentum(-3, kLuna), "-0.0003");
  EXPECT_EQ(format_momentum(0, kLuna), "0");
  AreaConfig odd = kLuna;
  odd.dt = 300'000;
  EXPECT_EQ(format_momentum(1, odd), "0.000033");
  EXPECT_EQ(format_momentum(2, odd), "0.000067");
}
