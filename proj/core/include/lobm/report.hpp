#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "lobm/detect.hpp"
#include "lobm/ingest.hpp"
#include "lobm/momentum.hpp"
#include "lobm/pipeline.hpp"

namespace lobm {

inline constexpr std::string_view kMomentumCsvHeader =
    "bucket_end,area,m_limit,m_market,m_total,cum_limit,cum_market,cum_total";
inline constexpr std::string_view kTracedCsvHeader = "timestamp,price,order_type,side,size";

/// One row per sample; momentum in quote-currency x size per second.
void write_momentum_csv(std::ostream& out, std::span<const MomentumSample> samples, const AreaConfig& cfg);

/// bucket_end,best_bid,best_ask,midprice from each bucket's reference quotes.
void write_quotes_csv(std::ostream& out, std::span<const Bucket> buckets, const AreaConfig& cfg);

/// "limit" / "market" for submits, "cancel", "match".
std::string_view order_type_label(const Event& e) noexcept;

/// rank,bucket_end,net_momentum,deviation
void write_deviations_csv(std::ostream& out, std::span<const DeviationScore> ranked, const AreaConfig& cfg);

/// Traced records in the `timestamp,price,order_type,side,size` table shape.
void write_traced_csv(std::ostream& out, std::span<const TraceEntry> traces, const AreaConfig& cfg);

/// rank,timestamp,order_id,price,order_type,side,size,z
void write_zscore_csv(std::ostream& out, const ZScoreResult& z, const AreaConfig& cfg);

std::string anomaly_report_json(const DetectionReport& report, const AnalysisConfig& acfg, const DetectConfig& dcfg);

std::string zscore_json(const ZScoreResult& z, const AreaConfig& cfg);

/// Side-by-side ranking of both detectors: rank, momentum bucket and its top
/// traced record, Z-score record; plus which Z-score records also appear in a
/// momentum trace.
std::string comparison_json(const DetectionReport& momentum, const ZScoreResult& z, const AreaConfig& cfg);
void write_comparison_csv(std::ostream& out, const DetectionReport& momentum, const ZScoreResult& z,
                          const AreaConfig& cfg);

/// Fixed-precision decimal used for deviations and Z-scores in text outputs.
std::string format_score(double v);

}  // namespace lobm
