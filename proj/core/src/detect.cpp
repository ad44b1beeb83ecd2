#include "lobm/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "lobm/error.hpp"

namespace lobm {
namespace {

// Two-pass population mean / stddev in long double.
struct Moments {
  long double mean = 0;
  long double stddev = 0;
};

template <typename Get>
Moments moments(std::size_t n, Get get) {
  long double sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += get(i);
  const long double mean = sum / static_cast<long double>(n);
  long double sq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double d = get(i) - mean;
    sq += d * d;
  }
  return {mean, std::sqrt(sq / static_cast<long double>(n))};
}

std::uint64_t magnitude(RawMomentum m) {
  return m < 0 ? 0 - static_cast<std::uint64_t>(m) : static_cast<std::uint64_t>(m);
}

}  // namespace

DeviationResult deviation_scores(std::span<const MomentumSample> samples, Window window) {
  if (samples.size() < 2) throw ContractError("deviation_scores needs at least two samples");
  if (!window.is_whole() && window.length < 2) throw ContractError("rolling window must hold at least two samples");

  DeviationResult out;
  out.scores.reserve(samples.size());
  auto value = [&](std::size_t i) { return static_cast<long double>(samples[i].m_total); };

  if (window.is_whole()) {
    const Moments m = moments(samples.size(), value);
    out.degenerate = m.stddev == 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double dev = out.degenerate ? 0.0 : static_cast<double>((value(i) - m.mean) / m.stddev);
      out.scores.push_back({samples[i].bucket_end, samples[i].m_total, dev});
    }
    return out;
  }

  // Trailing window; the first samples use whatever history exists (>= 2).
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::size_t begin = i + 1 >= window.length ? i + 1 - window.length : 0;
    const std::size_t n = i + 1 - begin;
    double dev = 0.0;
    if (n >= 2) {
      const Moments m = moments(n, [&](std::size_t j) { return value(begin + j); });
      if (m.stddev == 0) {
        out.degenerate = true;
      } else {
        dev = static_cast<double>((value(i) - m.mean) / m.stddev);
      }
    }
    out.scores.push_back({samples[i].bucket_end, samples[i].m_total, dev});
  }
  return out;
}

std::vector<DeviationScore> top_k(std::span<const DeviationScore> scores, std::size_t k, Ranking ranking) {
  if (k == 0) throw ContractError("top_k: k must be at least 1");
  std::vector<DeviationScore> out(scores.begin(), scores.end());
  auto key = [ranking](const DeviationScore& s) { return ranking == Ranking::Absolute ? std::abs(s.deviation) : s.deviation; };
  const std::size_t n = std::min(k, out.size());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), out.end(),
                    [&](const DeviationScore& a, const DeviationScore& b) {
                      const double ka = key(a);
                      const double kb = key(b);
                      if (ka != kb) return ka > kb;
                      return a.bucket_end < b.bucket_end;
                    });
  out.resize(n);
  return out;
}

std::vector<TraceEntry> trace_orders(std::span<const DeviationScore> anomalies, std::span<const Bucket> buckets,
                                     const AreaConfig& cfg, Area area, const MomentumOptions& options) {
  std::vector<TraceEntry> out;
  out.reserve(anomalies.size());
  for (const DeviationScore& a : anomalies) {
    TraceEntry entry;
    entry.anomaly = a;
    entry.bucket_start = a.bucket_end - cfg.dt;
    const auto it = std::lower_bound(buckets.begin(), buckets.end(), a.bucket_end,
                                     [](const Bucket& b, Micros end) { return b.end < end; });
    if (it != buckets.end() && it->end == a.bucket_end && it->ref_quotes) {
      const Quotes& q = *it->ref_quotes;
      auto consider = [&](const Event& e) {
        if (classify_area(effective_price(e, q), q, cfg.alpha) != area) return;
        entry.events.push_back({e, event_momentum(e, q, cfg, area)});
      };
      for (const Event& e : it->events) {
        consider(e);
        if (options.match_both_sides && e.action == Action::Match && e.price) {
          Event maker = e;
          maker.action = Action::Cancel;
          maker.side = opposite(e.side);
          maker.kind = OrderKind::Limit;
          consider(maker);
        }
      }
    }
    std::stable_sort(entry.events.begin(), entry.events.end(), [](const TracedEvent& x, const TracedEvent& y) {
      return magnitude(x.momentum) > magnitude(y.momentum);
    });
    entry.empty = entry.events.empty();
    out.push_back(std::move(entry));
  }
  return out;
}

std::string_view to_string(ClusterLabel l) noexcept {
  switch (l) {
    case ClusterLabel::LayeredCandidate: return "layered_spoofing_candidate";
    case ClusterLabel::Traditional: return "traditional";
    case ClusterLabel::Unpaired: return "unpaired";
  }
  return "?";
}

std::vector<Event> traced_events(std::span<const TraceEntry> traces) {
  std::vector<Event> out;
  for (const TraceEntry& t : traces) {
    for (const TracedEvent& te : t.events) out.push_back(te.event);
  }
  std::stable_sort(out.begin(), out.end(), [](const Event& a, const Event& b) { return a.ts < b.ts; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<LayeringCluster> cluster_layering(std::span<const Event> traced) {
  std::map<Units, std::vector<Event>> by_size;
  std::set<std::tuple<std::string, Action, Micros>> seen;
  for (const Event& e : traced) {
    if (!seen.emplace(e.order_id, e.action, e.ts).second) continue;
    by_size[e.size].push_back(e);
  }

  std::vector<LayeringCluster> clusters;
  for (auto& [size, events] : by_size) {
    LayeringCluster c;
    c.size = size;
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.ts < b.ts; });

    std::set<Ticks, std::greater<>> levels;
    for (const Event& e : events) {
      if (e.price) levels.insert(*e.price);
    }

    std::vector<std::size_t> submits;
    std::vector<std::size_t> cancels;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (events[i].action == Action::Submit && events[i].kind == OrderKind::Limit) submits.push_back(i);
      if (events[i].action == Action::Cancel) cancels.push_back(i);
    }
    std::vector<bool> submit_used(submits.size(), false);
    std::vector<bool> cancel_used(cancels.size(), false);
    std::set<Ticks, std::greater<>> paired;
    auto pair_pass = [&](auto&& same) {
      for (std::size_t ci = 0; ci < cancels.size(); ++ci) {
        if (cancel_used[ci]) continue;
        const Event& cancel = events[cancels[ci]];
        for (std::size_t si = 0; si < submits.size(); ++si) {
          if (submit_used[si]) continue;
          const Event& submit = events[submits[si]];
          if (submit.ts > cancel.ts || !same(submit, cancel)) continue;
          submit_used[si] = cancel_used[ci] = true;
          ++c.matched_pairs;
          if (submit.price) paired.insert(*submit.price);
          break;
        }
      }
    };
    pair_pass([](const Event& s, const Event& x) { return s.order_id == x.order_id; });
    pair_pass([](const Event& s, const Event& x) { return s.price == x.price && s.side == x.side; });

    c.price_levels.assign(levels.begin(), levels.end());
    c.paired_levels.assign(paired.begin(), paired.end());
    if (c.paired_levels.size() >= 2) {
      c.label = ClusterLabel::LayeredCandidate;
    } else if (c.matched_pairs > 0) {
      c.label = ClusterLabel::Traditional;
    } else {
      c.label = ClusterLabel::Unpaired;
    }
    c.events = std::move(events);
    clusters.push_back(std::move(c));
  }
  std::stable_sort(clusters.begin(), clusters.end(), [](const LayeringCluster& a, const LayeringCluster& b) {
    if (a.events.size() != b.events.size()) return a.events.size() > b.events.size();
    return a.size > b.size;
  });
  return clusters;
}

ZScoreResult zscore_baseline(std::span<const Event> events, std::size_t k) {
  if (events.size() < 2) throw ContractError("zscore_baseline needs at least two events");
  if (k == 0) throw ContractError("zscore_baseline: k must be at least 1");
  ZScoreResult out;
  const Moments m = moments(events.size(), [&](std::size_t i) { return static_cast<long double>(events[i].size); });
  out.mean = static_cast<double>(m.mean);
  out.stddev = static_cast<double>(m.stddev);
  if (m.stddev == 0) {
    out.degenerate = true;
    return out;
  }

  // Z is monotone in size, so rank indices by size and score only the winners.
  std::vector<std::size_t> idx(events.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t n = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (events[a].size != events[b].size) return events[a].size > events[b].size;
                      if (events[a].ts != events[b].ts) return events[a].ts < events[b].ts;
                      return a < b;
                    });
  out.ranked.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Event& e = events[idx[i]];
    out.ranked.push_back({e, static_cast<double>((static_cast<long double>(e.size) - m.mean) / m.stddev)});
  }
  return out;
}

}  // namespace lobm
