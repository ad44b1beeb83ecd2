#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lobm/book.hpp"
#include "lobm/detect.hpp"
#include "lobm/momentum.hpp"

namespace lobm {

struct AnalysisConfig {
  AreaConfig area;
  /// Reference quotes for the first bucket; derived from the stream's
  /// warm-up (first two-sided book) when absent.
  std::optional<Quotes> initial_quotes;
  ReplayMode mode = ReplayMode::Lenient;
  Split split = Split::Both;
  MomentumOptions momentum;
};

/// Buckets plus per-area momentum series for one time-sorted stream.
/// `buckets` view into the analysed stream, which must outlive this object.
struct Analysis {
  std::vector<Bucket> buckets;
  std::optional<Quotes> initial_quotes;
  std::size_t unclassifiable = 0;
  BookCounters counters;
  std::vector<MomentumSample> active;
  std::vector<MomentumSample> passive;

  const std::vector<MomentumSample>& series(Area area) const;
};

/// bucketize + momentum_series for the active and passive areas.
/// Throws ConfigError when no initial quotes are given and the book never
/// becomes two-sided.
Analysis analyze(std::span<const Event> sorted_events, const AnalysisConfig& cfg);

struct DetectConfig {
  Area area = Area::Passive;
  Window window = Window::whole();
  std::size_t k = 10;
  /// Minimum |deviation| (or signed deviation with Ranking::Signed) for a
  /// ranked bucket to count as an anomaly and be traced.
  double threshold = 5.0;
  Ranking ranking = Ranking::Absolute;
};

struct DetectionReport {
  DeviationResult deviations;
  std::vector<DeviationScore> ranked;
  std::vector<DeviationScore> anomalies;
  std::vector<TraceEntry> traces;
  std::vector<LayeringCluster> clusters;
};

/// deviation_scores -> top_k -> threshold -> trace_orders -> cluster_layering.
/// A series with fewer than two samples produces an empty report.
DetectionReport detect(const Analysis& analysis, const AnalysisConfig& acfg, const DetectConfig& dcfg);

}  // namespace lobm
