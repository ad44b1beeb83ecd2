#include "lobm/pipeline.hpp"

#include <cmath>

#include "lobm/error.hpp"

namespace lobm {

const std::vector<MomentumSample>& Analysis::series(Area area) const {
  if (area == Area::Outside) throw ContractError("no momentum series for the outside area");
  return area == Area::Active ? active : passive;
}

Analysis analyze(std::span<const Event> sorted_events, const AnalysisConfig& cfg) {
  cfg.area.validate();
  Analysis out;
  if (sorted_events.empty()) return out;

  out.initial_quotes = cfg.initial_quotes ? cfg.initial_quotes : warmup_quotes(sorted_events);
  if (!out.initial_quotes) {
    throw ConfigError("no initial quotes given and the book never becomes two-sided; pass initial quotes explicitly");
  }
  BucketizeResult b = bucketize(sorted_events, cfg.area, out.initial_quotes, cfg.mode);
  out.buckets = std::move(b.buckets);
  out.unclassifiable = b.unclassifiable;
  out.counters = b.counters;
  out.active = momentum_series(out.buckets, cfg.area, Area::Active, cfg.split, cfg.momentum);
  out.passive = momentum_series(out.buckets, cfg.area, Area::Passive, cfg.split, cfg.momentum);
  return out;
}

DetectionReport detect(const Analysis& analysis, const AnalysisConfig& acfg, const DetectConfig& dcfg) {
  DetectionReport report;
  const auto& samples = analysis.series(dcfg.area);
  if (samples.size() < 2) return report;

  report.deviations = deviation_scores(samples, dcfg.window);
  report.ranked = top_k(report.deviations.scores, dcfg.k, dcfg.ranking);
  for (const DeviationScore& s : report.ranked) {
    const double key = dcfg.ranking == Ranking::Absolute ? std::abs(s.deviation) : s.deviation;
    if (key >= dcfg.threshold) report.anomalies.push_back(s);
  }
  report.traces = trace_orders(report.anomalies, analysis.buckets, acfg.area, dcfg.area, acfg.momentum);
  const std::vector<Event> traced = traced_events(report.traces);
  report.clusters = cluster_layering(traced);
  return report;
}

}  // namespace lobm
