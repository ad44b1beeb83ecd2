#include <gtest/gtest.h>

#include "lobm/error.hpp"
#include "lobm/pipeline.hpp"
#include "lobm/synth.hpp"
#include "lobm/time.hpp"

using namespace lobm;

namespace {

std::vector<Event> spoofed_luna(std::uint64_t seed) {
  BackgroundParams p = luna_profile().background;
  p.seed = seed;
  SpoofSpec s;
  s.price = 114;
  s.size = 100'000'000;
  s.submit_ts = parse_timestamp("18:36:13.59");
  s.cancel_ts = parse_timestamp("18:38:16.02");
  return inject_spoof(gen_background(p), s, luna_profile().area).stream;
}

}  // namespace

TEST(Pipeline, WarmupQuotesWhenNoneGiven) {
  const auto events = spoofed_luna(1);
  AnalysisConfig cfg;
  cfg.area = luna_profile().area;
  const Analysis a = analyze(events, cfg);
  EXPECT_EQ(a.initial_quotes, (Quotes{174, 175}));
  EXPECT_EQ(a.active.size(), a.passive.size());
  EXPECT_EQ(a.unclassifiable, 0u);
}

TEST(Pipeline, NeverTwoSidedIsConfigError) {
  const std::vector<Event> events{{1, "a", Action::Submit, Side::Buy, OrderKind::Limit, 100, 1}};
  EXPECT_THROW(analyze(events, AnalysisConfig{}), ConfigError);
}

TEST(Pipeline, DetectsTraditionalSpoof) {
  const auto events = spoofed_luna(2);
  AnalysisConfig cfg;
  cfg.area = luna_profile().area;
  const Analysis a = analyze(events, cfg);
  const DetectionReport r = detect(a, cfg, DetectConfig{});
  ASSERT_GE(r.ranked.size(), 2u);
  EXPECT_EQ(r.ranked[0].bucket_end, bucket_end_for(parse_timestamp("18:38:16.02"), cfg.area.dt));
  EXPECT_EQ(r.ranked[1].bucket_end, bucket_end_for(parse_timestamp("18:36:13.59"), cfg.area.dt));
  ASSERT_EQ(r.anomalies.size(), 2u);
  const auto traced = traced_events(r.traces);
  ASSERT_EQ(traced.size(), 2u);
  EXPECT_EQ(traced[0].order_id.rfind("synthetic-", 0), 0u);
  ASSERT_EQ(r.clusters.size(), 1u);
  EXPECT_EQ(r.clusters[0].label, ClusterLabel::Traditional);
}

TEST(Pipeline, CleanStreamHasNoAnomalies) {
  BackgroundParams p = luna_profile().background;
  p.seed = 5;
  const auto events = gen_background(p);
  AnalysisConfig cfg;
  cfg.area = luna_profile().area;
  const Analysis a = analyze(events, cfg);
  DetectConfig d;
  d.threshold = 50.0;
  const DetectionReport r = detect(a, cfg, d);
  EXPECT_EQ(r.ranked.size(), 10u);
  EXPECT_TRUE(r.anomalies.empty());
  EXPECT_TRUE(r.traces.empty());
}

TEST(Pipeline, ShortSeriesGivesEmptyReport) {
  const std::vector<Event> events{{1, "a", Action::Submit, Side::Buy, OrderKind::Limit, 100, 1},
                                  {2, "b", Action::Submit, Side::Sell, OrderKind::Limit, 101, 1}};
  AnalysisConfig cfg;
  const Analysis a = analyze(events, cfg);
  const DetectionReport r = detect(a, cfg, DetectConfig{});
  EXPECT_TRUE(r.ranked.empty());
}
