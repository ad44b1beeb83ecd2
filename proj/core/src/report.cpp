#include "lobm/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace lobm {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string price_text(const Event& e, const AreaConfig& cfg) {
  return e.price ? cfg.tick_size.format(*e.price) : std::string();
}

ordered_json event_json(const Event& e, const AreaConfig& cfg) {
  ordered_json j;
  j["timestamp"] = format_timestamp(e.ts);
  j["ts_us"] = e.ts;
  j["order_id"] = e.order_id;
  j["order_type"] = std::string(order_type_label(e));
  j["action"] = std::string(to_string(e.action));
  j["side"] = std::string(to_string(e.side));
  j["kind"] = std::string(to_string(e.kind));
  j["price"] = e.price ? ordered_json(cfg.tick_size.format(*e.price)) : ordered_json(nullptr);
  j["size"] = cfg.size_unit.format(e.size);
  return j;
}

ordered_json score_json(const DeviationScore& s, const AreaConfig& cfg) {
  ordered_json j;
  j["bucket_end"] = format_timestamp(s.bucket_end);
  j["bucket_start"] = format_timestamp(s.bucket_end - cfg.dt);
  j["bucket_end_us"] = s.bucket_end;
  j["net_momentum"] = format_momentum(s.net_momentum, cfg);
  j["deviation"] = format_score(s.deviation);
  return j;
}

}  // namespace

std::string format_score(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.6f", v);
  std::string s = buf.data();
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string_view order_type_label(const Event& e) noexcept {
  switch (e.action) {
    case Action::Submit: return e.kind == OrderKind::Limit ? "limit" : "market";
    case Action::Cancel: return "cancel";
    case Action::Match: return "match";
  }
  return "?";
}

void write_momentum_csv(std::ostream& out, std::span<const MomentumSample> samples, const AreaConfig& cfg) {
  out << kMomentumCsvHeader << '\n';
  const auto cum = cumulative_series(samples);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const MomentumSample& s = samples[i];
    out << format_timestamp(s.bucket_end) << ',' << to_string(s.area) << ',' << format_momentum(s.m_limit, cfg) << ','
        << format_momentum(s.m_market, cfg) << ',' << format_momentum(s.m_total, cfg) << ','
        << format_momentum(cum[i].cum_limit, cfg) << ',' << format_momentum(cum[i].cum_market, cfg) << ','
        << format_momentum(cum[i].cum_total, cfg) << '\n';
  }
}

void write_quotes_csv(std::ostream& out, std::span<const Bucket> buckets, const AreaConfig& cfg) {
  out << "bucket_end,best_bid,best_ask,midprice\n";
  const DecimalScale half_tick(cfg.tick_size.mantissa() * 5, cfg.tick_size.exponent() + 1);
  for (const Bucket& b : buckets) {
    out << format_timestamp(b.end) << ',';
    if (b.ref_quotes) {
      out << cfg.tick_size.format(b.ref_quotes->best_bid) << ',' << cfg.tick_size.format(b.ref_quotes->best_ask)
          << ',' << half_tick.format(midprice(*b.ref_quotes).twice);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

void write_deviations_csv(std::ostream& out, std::span<const DeviationScore> ranked, const AreaConfig& cfg) {
  out << "rank,bucket_end,net_momentum,deviation\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    out << (i + 1) << ',' << format_timestamp(ranked[i].bucket_end) << ','
        << format_momentum(ranked[i].net_momentum, cfg) << ',' << format_score(ranked[i].deviation) << '\n';
  }
}

void write_traced_csv(std::ostream& out, std::span<const TraceEntry> traces, const AreaConfig& cfg) {
  out << kTracedCsvHeader << '\n';
  for (const Event& e : traced_events(traces)) {
    out << format_timestamp(e.ts) << ',' << price_text(e, cfg) << ',' << order_type_label(e) << ','
        << to_string(e.side) << ',' << cfg.size_unit.format(e.size) << '\n';
  }
}

void write_zscore_csv(std::ostream& out, const ZScoreResult& z, const AreaConfig& cfg) {
  out << "rank,timestamp,order_id,price,order_type,side,size,z\n";
  for (std::size_t i = 0; i < z.ranked.size(); ++i) {
    const Event& e = z.ranked[i].event;
    out << (i + 1) << ',' << format_timestamp(e.ts) << ',' << e.order_id << ',' << price_text(e, cfg) << ','
        << order_type_label(e) << ',' << to_string(e.side) << ',' << cfg.size_unit.format(e.size) << ','
        << format_score(z.ranked[i].z) << '\n';
  }
}

std::string anomaly_report_json(const DetectionReport& report, const AnalysisConfig& acfg, const DetectConfig& dcfg) {
  const AreaConfig& cfg = acfg.area;
  ordered_json j;
  j["config"] = {
      {"area", std::string(to_string(dcfg.area))},
      {"alpha", cfg.tick_size.format(cfg.alpha)},
      {"dt_us", cfg.dt},
      {"window", dcfg.window.is_whole() ? ordered_json("whole") : ordered_json(dcfg.window.length)},
      {"k", dcfg.k},
      {"threshold", format_score(dcfg.threshold)},
      {"ranking", dcfg.ranking == Ranking::Absolute ? "absolute" : "signed"},
      {"match_both_sides", acfg.momentum.match_both_sides},
  };
  j["samples"] = report.deviations.scores.size();
  j["degenerate_window"] = report.deviations.degenerate;

  ordered_json ranked = ordered_json::array();
  for (const auto& s : report.ranked) ranked.push_back(score_json(s, cfg));
  j["ranked"] = ranked;

  ordered_json traced = ordered_json::array();
  for (const TraceEntry& t : report.traces) {
    ordered_json entry = score_json(t.anomaly, cfg);
    entry["empty"] = t.empty;
    ordered_json events = ordered_json::array();
    for (const TracedEvent& te : t.events) {
      ordered_json ev = event_json(te.event, cfg);
      ev["momentum"] = format_momentum(te.momentum, cfg);
      events.push_back(ev);
    }
    entry["events"] = events;
    traced.push_back(entry);
  }
  j["traced"] = traced;

  ordered_json clusters = ordered_json::array();
  for (const LayeringCluster& c : report.clusters) {
    ordered_json cj;
    cj["size"] = cfg.size_unit.format(c.size);
    cj["label"] = std::string(to_string(c.label));
    ordered_json levels = ordered_json::array();
    for (Ticks p : c.price_levels) levels.push_back(cfg.tick_size.format(p));
    cj["price_levels"] = levels;
    ordered_json paired = ordered_json::array();
    for (Ticks p : c.paired_levels) paired.push_back(cfg.tick_size.format(p));
    cj["paired_levels"] = paired;
    cj["matched_pairs"] = c.matched_pairs;
    ordered_json events = ordered_json::array();
    for (const Event& e : c.events) events.push_back(event_json(e, cfg));
    cj["events"] = events;
    clusters.push_back(cj);
  }
  j["layering_clusters"] = clusters;
  return j.dump(2) + "\n";
}

std::string zscore_json(const ZScoreResult& z, const AreaConfig& cfg) {
  ordered_json j;
  j["mean_size"] = format_score(z.mean * cfg.size_unit.unit_value());
  j["stddev_size"] = format_score(z.stddev * cfg.size_unit.unit_value());
  j["degenerate"] = z.degenerate;
  ordered_json ranked = ordered_json::array();
  for (const auto& r : z.ranked) {
    ordered_json e = event_json(r.event, cfg);
    e["z"] = format_score(r.z);
    ranked.push_back(e);
  }
  j["ranked"] = ranked;
  return j.dump(2) + "\n";
}

namespace {

bool traced_contains(const DetectionReport& r, const Event& e) {
  for (const TraceEntry& t : r.traces) {
    for (const TracedEvent& te : t.events) {
      if (te.event == e) return true;
    }
  }
  return false;
}

}  // namespace

std::string comparison_json(const DetectionReport& momentum, const ZScoreResult& z, const AreaConfig& cfg) {
  ordered_json j;
  const std::size_t rows = std::max(momentum.ranked.size(), z.ranked.size());
  ordered_json table = ordered_json::array();
  for (std::size_t i = 0; i < rows; ++i) {
    ordered_json row;
    row["rank"] = i + 1;
    if (i < momentum.ranked.size()) {
      row["momentum"] = score_json(momentum.ranked[i], cfg);
    } else {
      row["momentum"] = nullptr;
    }
    row["zscore"] = nullptr;
    if (i < z.ranked.size()) {
      ordered_json e = event_json(z.ranked[i].event, cfg);
      e["z"] = format_score(z.ranked[i].z);
      e["in_momentum_trace"] = traced_contains(momentum, z.ranked[i].event);
      row["zscore"] = e;
    }
    table.push_back(row);
  }
  j["rows"] = table;

  ordered_json momentum_only = ordered_json::array();
  for (const Event& e : traced_events(momentum.traces)) {
    bool in_z = false;
    for (const auto& r : z.ranked) in_z = in_z || r.event == e;
    if (!in_z) momentum_only.push_back(event_json(e, cfg));
  }
  j["traced_not_in_zscore"] = momentum_only;
  return j.dump(2) + "\n";
}

void write_comparison_csv(std::ostream& out, const DetectionReport& momentum, const ZScoreResult& z,
                          const AreaConfig& cfg) {
  out << "rank,momentum_bucket_end,deviation,momentum_top_record,zscore_timestamp,zscore_record,z\n";
  const std::size_t rows = std::max(momentum.ranked.size(), z.ranked.size());
  auto record = [&](const Event& e) {
    return std::string(order_type_label(e)) + " " + std::string(to_string(e.side)) + " " +
           cfg.size_unit.format(e.size) + " @" + price_text(e, cfg);
  };
  for (std::size_t i = 0; i < rows; ++i) {
    out << (i + 1) << ',';
    if (i < momentum.ranked.size()) {
      const DeviationScore& s = momentum.ranked[i];
      out << format_timestamp(s.bucket_end) << ',' << format_score(s.deviation) << ',';
      std::string top;
      for (const TraceEntry& t : momentum.traces) {
        if (t.anomaly.bucket_end == s.bucket_end && !t.events.empty()) top = record(t.events.front().event);
      }
      out << top << ',';
    } else {
      out << ",,,";
    }
    if (i < z.ranked.size()) {
      out << format_timestamp(z.ranked[i].event.ts) << ',' << record(z.ranked[i].event) << ','
          << format_score(z.ranked[i].z);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

}  // namespace lobm
