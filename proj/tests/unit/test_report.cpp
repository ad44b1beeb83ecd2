#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "lobm/pipeline.hpp"
#include "lobm/report.hpp"
#include "lobm/svg.hpp"
#include "lobm/synth.hpp"
#include "lobm/time.hpp"

using namespace lobm;

namespace {

struct Fixture {
  std::vector<Event> events;
  AnalysisConfig acfg;
  Analysis analysis;
  DetectionReport report;
};

Fixture run(std::uint64_t seed) {
  Fixture f;
  BackgroundParams p = luna_profile().background;
  p.seed = seed;
  p.duration_s = 300;
  SpoofSpec s;
  s.price = 114;
  s.size = 100'000'000;
  s.submit_ts = parse_timestamp("18:31:00");
  s.cancel_ts = parse_timestamp("18:32:00");
  f.events = inject_spoof(gen_background(p), s, luna_profile().area).stream;
  f.acfg.area = luna_profile().area;
  f.analysis = analyze(f.events, f.acfg);
  f.report = detect(f.analysis, f.acfg, DetectConfig{});
  return f;
}

}  // namespace

TEST(Report, MomentumCsvShape) {
  const Fixture f = run(1);
  std::ostringstream out;
  write_momentum_csv(out, f.analysis.passive, f.acfg.area);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kMomentumCsvHeader);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
  }
  EXPECT_EQ(rows, f.analysis.passive.size());
}

TEST(Report, TracedCsvTableShape) {
  const Fixture f = run(2);
  std::ostringstream out;
  write_traced_csv(out, f.report.traces, f.acfg.area);
  EXPECT_EQ(out.str(),
            "timestamp,price,order_type,side,size\n"
            "18:31:00.000000,1.14,limit,buy,100000\n"
            "18:32:00.000000,1.14,cancel,buy,100000\n");
}

TEST(Report, AnomalyJson) {
  const Fixture f = run(3);
  const auto j = nlohmann::json::parse(anomaly_report_json(f.report, f.acfg, DetectConfig{}));
  EXPECT_EQ(j["ranked"].size(), 10u);
  EXPECT_EQ(j["traced"].size(), 2u);
  EXPECT_EQ(j["traced"][0]["events"][0]["momentum"], "-400000");
  EXPECT_EQ(j["layering_clusters"][0]["label"], "traditional");
  EXPECT_EQ(j["config"]["alpha"], "0.5");
}

TEST(Report, ByteDeterminism) {
  const Fixture a = run(4);
  const Fixture b = run(4);
  EXPECT_EQ(anomaly_report_json(a.report, a.acfg, DetectConfig{}), anomaly_report_json(b.report, b.acfg, DetectConfig{}));
  SvgOptions opt;
  EXPECT_EQ(render_momentum_svg(a.analysis.passive, a.analysis.buckets, a.acfg.area, opt),
            render_momentum_svg(b.analysis.passive, b.analysis.buckets, b.acfg.area, opt));
}

TEST(Report, SvgLayout) {
  const Fixture f = run(5);
  SvgOptions opt;
  const std::string two = render_momentum_svg(f.analysis.passive, f.analysis.buckets, f.acfg.area, opt);
  EXPECT_NE(two.find("limit orders"), std::string::npos);
  EXPECT_NE(two.find("market orders"), std::string::npos);
  EXPECT_EQ(two.find("<metadata>"), std::string::npos);
  opt.separated = false;
  opt.metadata = "generated 2024";
  const std::string one = render_momentum_svg(f.analysis.passive, f.analysis.buckets, f.acfg.area, opt);
  EXPECT_EQ(one.find("market orders"), std::string::npos);
  EXPECT_NE(one.find("<metadata>generated 2024</metadata>"), std::string::npos);
  // downsampled: polyline point count bounded by twice the plot width
  const auto pos = two.find("points=\"");
  const auto end = two.find('"', pos + 8);
  EXPECT_LE(std::count(two.begin() + static_cast<std::ptrdiff_t>(pos), two.begin() + static_cast<std::ptrdiff_t>(end), ' '),
            2 * 1200);
}

TEST(Report, QuotesCsv) {
  const Fixture f = run(6);
  std::ostringstream out;
  write_quotes_csv(out, f.analysis.buckets, f.acfg.area);
  std::istringstream in(out.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "bucket_end,best_bid,best_ask,midprice");
  EXPECT_EQ(first, "18:30:00.000000,1.74,1.75,1.745");
}
