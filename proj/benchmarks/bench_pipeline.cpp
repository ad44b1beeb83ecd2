#include <benchmark/benchmark.h>

#include <sstream>

#include "lobm/book.hpp"
#include "lobm/detect.hpp"
#include "lobm/ingest.hpp"
#include "lobm/momentum.hpp"
#include "lobm/pipeline.hpp"
#include "lobm/synth.hpp"

using namespace lobm;

namespace {

// Ten minutes of the btc preset, roughly a quarter million events.
const std::vector<Event>& stream() {
  static const std::vector<Event> events = [] {
    BackgroundParams p = btc_profile().background;
    p.seed = 1;
    return gen_background(p);
  }();
  return events;
}

const AreaConfig& area() {
  static const AreaConfig cfg = btc_profile().area;
  return cfg;
}

Precision precision() { return Precision{area().tick_size, area().size_unit}; }

void BM_ParseCsv(benchmark::State& state) {
  std::ostringstream out;
  write_events(out, stream(), Format::CanonicalCsv, precision());
  const std::string text = out.str();
  ReadOptions opt;
  opt.precision = precision();
  for (auto _ : state) benchmark::DoNotOptimize(parse_events(text, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream().size()));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseCsv)->Unit(benchmark::kMillisecond);

void BM_Bucketize(benchmark::State& state) {
  const auto q = warmup_quotes(stream());
  for (auto _ : state) benchmark::DoNotOptimize(bucketize(stream(), area(), q));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream().size()));
}
BENCHMARK(BM_Bucketize)->Unit(benchmark::kMillisecond);

void BM_MomentumSeries(benchmark::State& state) {
  const auto b = bucketize(stream(), area(), warmup_quotes(stream()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(momentum_series(b.buckets, area(), Area::Active));
    benchmark::DoNotOptimize(momentum_series(b.buckets, area(), Area::Passive));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream().size()));
}
BENCHMARK(BM_MomentumSeries)->Unit(benchmark::kMillisecond);

void BM_Deviation(benchmark::State& state) {
  const auto b = bucketize(stream(), area(), warmup_quotes(stream()));
  const auto series = momentum_series(b.buckets, area(), Area::Passive);
  const Window w = state.range(0) == 0 ? Window::whole() : Window::rolling(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto d = deviation_scores(series, w);
    benchmark::DoNotOptimize(top_k(d.scores, 10));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(series.size()));
}
BENCHMARK(BM_Deviation)->Arg(0)->Arg(600)->Unit(benchmark::kMicrosecond);

void BM_AnalyzeAndDetect(benchmark::State& state) {
  AnalysisConfig cfg;
  cfg.area = area();
  for (auto _ : state) {
    const Analysis a = analyze(stream(), cfg);
    benchmark::DoNotOptimize(detect(a, cfg, DetectConfig{}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream().size()));
}
BENCHMARK(BM_AnalyzeAndDetect)->Unit(benchmark::kMillisecond);

void BM_ZScore(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(zscore_baseline(stream(), 10));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream().size()));
}
BENCHMARK(BM_ZScore)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
