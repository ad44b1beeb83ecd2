#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lobm/book.hpp"
#include "lobm/momentum.hpp"

namespace lobm {

struct DeviationScore {
  Micros bucket_end = 0;
  RawMomentum net_momentum = 0;
  double deviation = 0.0;
};

/// Statistics window: the whole series, or a trailing window of `length`
/// samples ending at (and including) the scored sample.
struct Window {
  std::size_t length = 0;  // 0 = whole series

  static constexpr Window whole() noexcept { return {}; }
  static constexpr Window rolling(std::size_t n) noexcept { return {n}; }
  constexpr bool is_whole() const noexcept { return length == 0; }
};

struct DeviationResult {
  std::vector<DeviationScore> scores;
  /// Some window had zero standard deviation; its deviations are reported as 0.
  bool degenerate = false;
};

/// deviation_i = (m_i - mean) / stddev over the window, population statistics.
/// Throws ContractError with fewer than two samples or a rolling window of 1.
DeviationResult deviation_scores(std::span<const MomentumSample> samples, Window window = Window::whole());

enum class Ranking {
  /// Largest |deviation| first (jumps and bounce-backs both rank high).
  Absolute,
  /// Largest signed deviation first.
  Signed,
};

/// The k highest-ranked scores; ties go to the earlier bucket. k larger than
/// the series returns the whole series. Throws ContractError when k == 0.
std::vector<DeviationScore> top_k(std::span<const DeviationScore> scores, std::size_t k,
                                  Ranking ranking = Ranking::Absolute);

struct TracedEvent {
  Event event;
  RawMomentum momentum = 0;
};

struct TraceEntry {
  DeviationScore anomaly;
  Micros bucket_start = 0;
  /// Events of the requested area, largest |momentum| first.
  std::vector<TracedEvent> events;
  /// True when the bucket held no event of the requested area.
  bool empty = false;
};

/// For each anomalous bucket, the events that contributed to the area's
/// momentum, sorted by |momentum| descending (stable on stream order).
/// `buckets` must be the buckets the scored samples were computed from.
std::vector<TraceEntry> trace_orders(std::span<const DeviationScore> anomalies, std::span<const Bucket> buckets,
                                     const AreaConfig& cfg, Area area = Area::Passive,
                                     const MomentumOptions& options = {});

enum class ClusterLabel {
  /// At least two distinct price levels with matched submit/cancel pairs.
  LayeredCandidate,
  /// Matched submit/cancel pairs on a single price level.
  Traditional,
  /// No submit/cancel pair inside the cluster.
  Unpaired,
};

std::string_view to_string(ClusterLabel l) noexcept;

struct LayeringCluster {
  Units size = 0;
  ClusterLabel label = ClusterLabel::Unpaired;
  /// Distinct quoted prices among all events, highest first.
  std::vector<Ticks> price_levels;
  /// Distinct prices that carry a matched submit/cancel pair, highest first.
  std::vector<Ticks> paired_levels;
  std::size_t matched_pairs = 0;
  std::vector<Event> events;
};

/// Groups events by exact size. Submits and cancels pair by order id first and
/// then by equal price. Clusters come out ordered by descending event count,
/// then descending size. Duplicate events (same id, action and ts) are merged.
std::vector<LayeringCluster> cluster_layering(std::span<const Event> traced);

/// Flattens trace entries into their events (stream order, duplicates removed).
std::vector<Event> traced_events(std::span<const TraceEntry> traces);

struct ZScoreRecord {
  Event event;
  double z = 0.0;
};

struct ZScoreResult {
  std::vector<ZScoreRecord> ranked;
  double mean = 0.0;
  double stddev = 0.0;
  bool degenerate = false;
};

/// Z = (size - mean) / stddev over every event's size (population statistics);
/// the k largest Z first, ties to the earlier event. Zero stddev yields an empty
/// ranking with `degenerate` set. Throws ContractError with fewer than two events.
ZScoreResult zscore_baseline(std::span<const Event> events, std::size_t k);

}  // namespace lobm
