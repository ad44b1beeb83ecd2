#include "lobm/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lobm/book.hpp"
#include "lobm/detect.hpp"
#include "lobm/error.hpp"
#include "lobm/ingest.hpp"
#include "lobm/momentum.hpp"
#include "lobm/pipeline.hpp"
#include "lobm/report.hpp"
#include "lobm/svg.hpp"
#include "lobm/synth.hpp"
#include "lobm/time.hpp"

namespace lobm::cli {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct Common {
  std::vector<std::string> inputs;
  std::string format = "canonical-csv";
  std::string profile = "luna";
  std::string tick_size;
  std::string size_unit;
  std::string alpha;
  std::string dt;
  std::string initial_quotes;
  bool strict = false;
  bool skip_malformed = false;
  std::string output_dir = ".";
};

struct MomentumFlags {
  std::string area = "both";
  std::string split = "separated";
  std::string orders = "all";
  bool match_both_sides = false;
};

struct DetectFlags {
  std::string detector = "momentum-deviation";
  std::string area = "passive";
  std::size_t k = 10;
  double threshold = 5.0;
  bool signed_ranking = false;
  std::string window = "whole";
};

struct InjectFlags {
  std::vector<std::string> specs;
  std::string out_format = "canonical-csv";
};

struct GenerateFlags {
  std::uint64_t seed = 1;
  std::string duration;
  double rate = 0;
  double quote_move_probability = -1;
  double active_fraction = -1;
  std::string start;
};

void add_precision_options(CLI::App& cmd, Common& c) {
  cmd.add_option("--profile", c.profile, "Market preset for unit and area defaults (luna, btc)")
      ->check(CLI::IsMember({"luna", "btc"}));
  cmd.add_option("--tick-size", c.tick_size, "Price tick in quote currency (e.g. 0.01)");
  cmd.add_option("--size-unit", c.size_unit, "Minimum size unit (e.g. 0.001)");
  cmd.add_option("--alpha", c.alpha, "Active-area half width in quote currency (default 0.5)");
  cmd.add_option("--dt", c.dt, "Sampling interval in seconds (default 0.1)");
  cmd.add_option("-o,--output-dir", c.output_dir, "Output directory")->envname(kOutputDirEnv);
}

void add_input_options(CLI::App& cmd, Common& c) {
  cmd.add_option("inputs", c.inputs, "Event files (.gz accepted)")->required()->check(CLI::ExistingFile);
  cmd.add_option("--format", c.format, "canonical-csv, canonical-jsonl or exchange-jsonl")
      ->check(CLI::IsMember({"canonical-csv", "canonical-jsonl", "exchange-jsonl", "csv", "jsonl", "exchange"}));
  cmd.add_option("--initial-quotes", c.initial_quotes, "Reference quotes for the first bucket as BID,ASK");
  cmd.add_flag("--strict", c.strict, "Fail on cancels or matches of unknown orders");
  cmd.add_flag("--skip-malformed", c.skip_malformed, "Skip malformed records instead of failing");
  add_precision_options(cmd, c);
}

void add_momentum_options(CLI::App& cmd, MomentumFlags& m) {
  cmd.add_option("--split", m.split, "Plot layout: combined or separated (limit/market rows)")
      ->check(CLI::IsMember({"combined", "separated"}));
  cmd.add_option("--orders", m.orders, "Contributions counted: all, limit or market")
      ->check(CLI::IsMember({"all", "limit", "market"}));
  cmd.add_flag("--match-both-sides", m.match_both_sides, "Also count the maker side of each match");
}

void add_detect_options(CLI::App& cmd, DetectFlags& d) {
  cmd.add_option("-k", d.k, "Number of ranked buckets")->check(CLI::PositiveNumber);
  cmd.add_option("--threshold", d.threshold, "Minimum deviation for a traced anomaly");
  cmd.add_flag("--signed-ranking", d.signed_ranking, "Rank by signed deviation instead of magnitude");
  cmd.add_option("--window", d.window, "Deviation window: whole or a bucket count");
  cmd.add_option("--area", d.area, "Area scored by the detector")->check(CLI::IsMember({"active", "passive"}));
}

MarketProfile resolve_profile(const std::string& name) {
  const auto p = profile_by_name(name);
  if (!p) throw ConfigError("unknown profile '" + name + "'");
  return *p;
}

DecimalScale parse_scale(const std::string& text, const char* what) {
  try {
    return DecimalScale::parse(text);
  } catch (const ParseError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

AreaConfig resolve_area(const Common& c) {
  AreaConfig cfg = resolve_profile(c.profile).area;
  if (!c.tick_size.empty()) cfg.tick_size = parse_scale(c.tick_size, "--tick-size");
  if (!c.size_unit.empty()) cfg.size_unit = parse_scale(c.size_unit, "--size-unit");
  if (!c.alpha.empty()) {
    try {
      cfg.alpha = cfg.tick_size.to_units(c.alpha);
    } catch (const ParseError& e) {
      throw ConfigError(std::string("--alpha: ") + e.what());
    }
  }
  if (!c.dt.empty()) cfg.dt = parse_seconds(c.dt);
  cfg.validate();
  return cfg;
}

Precision precision_of(const AreaConfig& cfg) { return Precision{cfg.tick_size, cfg.size_unit}; }

std::optional<Quotes> resolve_quotes(const Common& c, const AreaConfig& cfg) {
  if (c.initial_quotes.empty()) return std::nullopt;
  const auto comma = c.initial_quotes.find(',');
  if (comma == std::string::npos) throw ConfigError("--initial-quotes expects BID,ASK");
  Quotes q;
  try {
    q.best_bid = cfg.tick_size.to_units(c.initial_quotes.substr(0, comma));
    q.best_ask = cfg.tick_size.to_units(c.initial_quotes.substr(comma + 1));
  } catch (const ParseError& e) {
    throw ConfigError(std::string("--initial-quotes: ") + e.what());
  }
  if (!q.valid()) throw ConfigError("--initial-quotes: bid must be below ask");
  return q;
}

Format resolve_format(const std::string& text) {
  const auto f = parse_format(text);
  if (!f) throw ConfigError("unknown format '" + text + "'");
  return *f;
}

Window resolve_window(const std::string& text) {
  if (text == "whole") return Window::whole();
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || ptr != text.data() + text.size() || n < 2) {
    throw ConfigError("--window expects 'whole' or a bucket count of at least 2");
  }
  return Window::rolling(n);
}

Split resolve_orders(const std::string& text) {
  if (text == "limit") return Split::Limit;
  if (text == "market") return Split::Market;
  return Split::Both;
}

struct Loaded {
  std::vector<Event> events;
  ParseStats stats;
};

Loaded load(const Common& c, const AreaConfig& cfg, std::ostream& err, bool sort = true) {
  ReadOptions options;
  options.format = resolve_format(c.format);
  options.precision = precision_of(cfg);
  options.lenient = c.skip_malformed;
  Loaded out;
  for (const std::string& path : c.inputs) {
    ReadResult r = read_events(path, options);
    out.stats.merge(r.stats, options.max_samples);
    out.events.insert(out.events.end(), std::make_move_iterator(r.events.begin()),
                      std::make_move_iterator(r.events.end()));
  }
  if (out.stats.rejected > 0) {
    err << "warning: skipped " << out.stats.rejected << " malformed record(s)\n";
    for (const ParseIssue& issue : out.stats.samples) {
      err << "  line " << issue.line << " (" << issue.field << "): " << issue.message << '\n';
    }
  }
  if (sort) sort_by_time(out.events);
  return out;
}

fs::path prepare_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw IoError("cannot create output directory '" + dir + "'");
  return p;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  return f;
}

void write_text(const fs::path& path, const std::string& text) {
  auto f = open_out(path);
  f << text;
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

AnalysisConfig analysis_config(const Common& c, const MomentumFlags& m, const AreaConfig& cfg) {
  AnalysisConfig acfg;
  acfg.area = cfg;
  acfg.initial_quotes = resolve_quotes(c, cfg);
  acfg.mode = c.strict ? ReplayMode::Strict : ReplayMode::Lenient;
  acfg.split = resolve_orders(m.orders);
  acfg.momentum.match_both_sides = m.match_both_sides;
  return acfg;
}

Analysis analyze_or_empty(std::span<const Event> events, const AnalysisConfig& acfg, std::ostream& err) {
  if (events.empty()) {
    err << "warning: input contains no events; series are empty\n";
    return Analysis{};
  }
  return analyze(events, acfg);
}

std::string quotes_text(const std::optional<Quotes>& q, const AreaConfig& cfg) {
  if (!q) return "";
  return cfg.tick_size.format(q->best_bid) + "," + cfg.tick_size.format(q->best_ask);
}

ordered_json run_report(const std::string& command, const Common& c, const AnalysisConfig& acfg,
                        const MomentumFlags& m, const Loaded& loaded, const Analysis& a) {
  const AreaConfig& cfg = acfg.area;
  ordered_json j;
  j["command"] = command;
  j["inputs"] = c.inputs;
  j["format"] = std::string(to_string(resolve_format(c.format)));
  j["config"] = {
      {"profile", c.profile},
      {"tick_size", cfg.tick_size.to_string()},
      {"size_unit", cfg.size_unit.to_string()},
      {"alpha", cfg.tick_size.format(cfg.alpha)},
      {"dt_us", cfg.dt},
      {"orders", m.orders},
      {"split", m.split},
      {"match_both_sides", m.match_both_sides},
      {"replay", c.strict ? "strict" : "lenient"},
  };
  j["records"] = {{"total", loaded.stats.total_records},
                  {"accepted", loaded.stats.accepted},
                  {"rejected", loaded.stats.rejected},
                  {"skipped_messages", loaded.stats.skips.total()}};
  j["events"] = loaded.events.size();
  j["initial_quotes"] = quotes_text(a.initial_quotes, cfg);
  j["initial_quotes_source"] = acfg.initial_quotes ? "given" : "warm-up";
  j["buckets"] = a.buckets.size();
  j["unclassifiable_buckets"] = a.unclassifiable;
  j["book"] = {{"unknown_cancels", a.counters.unknown_cancels},
               {"unknown_matches", a.counters.unknown_matches},
               {"duplicate_submits", a.counters.duplicate_submits}};
  j["samples"] = {{"active", a.active.size()}, {"passive", a.passive.size()}};
  return j;
}

std::vector<Area> areas_for(const std::string& text) {
  if (text == "active") return {Area::Active};
  if (text == "passive") return {Area::Passive};
  return {Area::Active, Area::Passive};
}

int cmd_analyze(const Common& c, const MomentumFlags& m, std::ostream& out, std::ostream& err) {
  const AreaConfig cfg = resolve_area(c);
  const AnalysisConfig acfg = analysis_config(c, m, cfg);
  const Loaded loaded = load(c, cfg, err);
  const Analysis a = analyze_or_empty(loaded.events, acfg, err);
  const fs::path dir = prepare_dir(c.output_dir);

  for (Area area : areas_for(m.area)) {
    const std::string name = std::string(to_string(area));
    const auto& series = a.series(area);
    {
      auto f = open_out(dir / ("momentum_" + name + ".csv"));
      write_momentum_csv(f, series, cfg);
    }
    SvgOptions svg;
    svg.title = "Cumulative net momentum, " + name + " area";
    svg.separated = m.split == "separated";
    write_text(dir / ("momentum_" + name + ".svg"), render_momentum_svg(series, a.buckets, cfg, svg));
    out << name << ": " << series.size() << " samples\n";
  }
  {
    auto f = open_out(dir / "quotes.csv");
    write_quotes_csv(f, a.buckets, cfg);
  }
  write_text(dir / "run_report.json", run_report("analyze", c, acfg, m, loaded, a).dump(2) + "\n");
  if (a.unclassifiable > 0) err << "note: " << a.unclassifiable << " bucket(s) had a one-sided or crossed book\n";
  return kExitOk;
}

DetectConfig detect_config(const DetectFlags& d) {
  DetectConfig dcfg;
  dcfg.area = *parse_area(d.area);
  dcfg.window = resolve_window(d.window);
  dcfg.k = d.k;
  dcfg.threshold = d.threshold;
  dcfg.ranking = d.signed_ranking ? Ranking::Signed : Ranking::Absolute;
  return dcfg;
}

ZScoreResult zscore_or_empty(std::span<const Event> events, std::size_t k, std::ostream& err) {
  if (events.size() < 2) {
    err << "warning: fewer than two events; Z-score ranking is empty\n";
    return ZScoreResult{};
  }
  return zscore_baseline(events, k);
}

void print_ranking(std::ostream& out, const DetectionReport& r, const AreaConfig& cfg) {
  out << "rank  bucket_end        deviation   net_momentum\n";
  for (std::size_t i = 0; i < r.ranked.size(); ++i) {
    const DeviationScore& s = r.ranked[i];
    out << (i + 1) << "  " << format_timestamp(s.bucket_end) << "  " << format_score(s.deviation) << "  "
        << format_momentum(s.net_momentum, cfg) << '\n';
  }
  out << r.anomalies.size() << " bucket(s) above threshold, " << traced_events(r.traces).size()
      << " traced record(s)\n";
}

int cmd_detect(const Common& c, const MomentumFlags& m, const DetectFlags& d, std::ostream& out,
               std::ostream& err) {
  const AreaConfig cfg = resolve_area(c);
  const AnalysisConfig acfg = analysis_config(c, m, cfg);
  const DetectConfig dcfg = detect_config(d);
  const Loaded loaded = load(c, cfg, err);
  const fs::path dir = prepare_dir(c.output_dir);
  const bool run_momentum = d.detector != "zscore";
  const bool run_zscore = d.detector != "momentum-deviation";

  if (run_momentum) {
    const Analysis a = analyze_or_empty(loaded.events, acfg, err);
    const DetectionReport r = detect(a, acfg, dcfg);
    if (r.deviations.degenerate) err << "warning: zero variance in a deviation window\n";
    write_text(dir / "anomaly_report.json", anomaly_report_json(r, acfg, dcfg));
    {
      auto f = open_out(dir / "deviations.csv");
      write_deviations_csv(f, r.ranked, cfg);
    }
    {
      auto f = open_out(dir / "traced_orders.csv");
      write_traced_csv(f, r.traces, cfg);
    }
    print_ranking(out, r, cfg);
  }
  if (run_zscore) {
    const ZScoreResult z = zscore_or_empty(loaded.events, dcfg.k, err);
    write_text(dir / "zscore.json", zscore_json(z, cfg));
    auto f = open_out(dir / "zscore.csv");
    write_zscore_csv(f, z, cfg);
    out << "zscore: " << z.ranked.size() << " ranked record(s)\n";
  }
  return kExitOk;
}

int cmd_compare(const Common& c, const MomentumFlags& m, const DetectFlags& d, std::ostream& out,
                std::ostream& err) {
  const AreaConfig cfg = resolve_area(c);
  const AnalysisConfig acfg = analysis_config(c, m, cfg);
  const DetectConfig dcfg = detect_config(d);
  const Loaded loaded = load(c, cfg, err);
  const fs::path dir = prepare_dir(c.output_dir);

  const Analysis a = analyze_or_empty(loaded.events, acfg, err);
  const DetectionReport r = detect(a, acfg, dcfg);
  const ZScoreResult z = zscore_or_empty(loaded.events, dcfg.k, err);
  write_text(dir / "compare.json", comparison_json(r, z, cfg));
  auto f = open_out(dir / "compare.csv");
  write_comparison_csv(f, r, z, cfg);
  std::ostringstream table;
  write_comparison_csv(table, r, z, cfg);
  out << table.str();
  return kExitOk;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<Injection> apply_specs(std::vector<Event>& stream, const std::vector<std::string>& specs,
                                   const AreaConfig& cfg, std::ostream& err) {
  std::vector<Injection> done;
  for (const std::string& path : specs) {
    const SpoofSpec spec = parse_spoof_spec(read_file(path), precision_of(cfg));
    Injection inj = inject_spoof(stream, spec, cfg);
    for (const std::string& w : inj.warnings) err << "warning: " << path << ": " << w << '\n';
    stream = inj.stream;
    inj.stream.clear();
    done.push_back(std::move(inj));
  }
  return done;
}

std::string stream_file_name(const std::string& stem, Format f) {
  return stem + (f == Format::CanonicalJsonl ? ".jsonl" : ".csv");
}

int cmd_inject(const Common& c, const InjectFlags& in, std::ostream& out, std::ostream& err) {
  const AreaConfig cfg = resolve_area(c);
  const Format out_format = resolve_format(in.out_format);
  if (out_format == Format::ExchangeJsonl) throw ConfigError("--out-format must be a canonical format");
  Loaded loaded = load(c, cfg, err);
  const fs::path dir = prepare_dir(c.output_dir);
  const std::vector<Injection> injections = apply_specs(loaded.events, in.specs, cfg, err);
  write_events(dir / stream_file_name("injected", out_format), loaded.events, out_format, precision_of(cfg));
  write_text(dir / "labels.json", labels_json(injections, precision_of(cfg)) + "\n");
  std::size_t added = 0;
  for (const Injection& i : injections) added += i.injected.size();
  out << "injected " << added << " event(s); stream has " << loaded.events.size() << " event(s)\n";
  return kExitOk;
}

int cmd_generate(const Common& c, const GenerateFlags& g, const InjectFlags& in, std::ostream& out,
                 std::ostream& err) {
  const MarketProfile profile = resolve_profile(c.profile);
  const AreaConfig cfg = resolve_area(c);
  const Format out_format = resolve_format(in.out_format);
  if (out_format == Format::ExchangeJsonl) throw ConfigError("--out-format must be a canonical format");

  BackgroundParams params = profile.background;
  params.seed = g.seed;
  params.alpha = cfg.alpha;
  if (!g.duration.empty()) params.duration_s = static_cast<double>(parse_seconds(g.duration)) / kMicrosPerSecond;
  if (g.rate > 0) params.event_rate = g.rate;
  if (g.quote_move_probability >= 0) params.quote_move_probability = g.quote_move_probability;
  if (g.active_fraction >= 0) params.active_fraction = g.active_fraction;
  if (!g.start.empty()) params.start = parse_timestamp(g.start);
  params.validate();

  std::vector<Event> stream = gen_background(params);
  const fs::path dir = prepare_dir(c.output_dir);
  const std::vector<Injection> injections = apply_specs(stream, in.specs, cfg, err);
  write_events(dir / stream_file_name("stream", out_format), stream, out_format, precision_of(cfg));
  if (!injections.empty()) write_text(dir / "labels.json", labels_json(injections, precision_of(cfg)) + "\n");
  out << "generated " << stream.size() << " event(s)\n";
  return kExitOk;
}

int cmd_validate(Common c, std::ostream& out, std::ostream& err) {
  c.skip_malformed = true;
  const AreaConfig cfg = resolve_area(c);
  const Loaded loaded = load(c, cfg, err, false);
  StreamReport report = validate_stream(loaded.events);
  report.absorb(loaded.stats);
  const std::string text = to_json(report);
  const fs::path dir = prepare_dir(c.output_dir);
  write_text(dir / "stream_report.json", text + (text.ends_with('\n') ? "" : "\n"));
  out << text << (text.ends_with('\n') ? "" : "\n");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Order-book momentum analytics and spoofing detection"};
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);

  Common common;
  MomentumFlags momentum;
  DetectFlags det;
  InjectFlags inj;
  GenerateFlags gen;

  auto* analyze_cmd = app.add_subcommand("analyze", "Per-bucket and cumulative momentum series with plots");
  add_input_options(*analyze_cmd, common);
  add_momentum_options(*analyze_cmd, momentum);
  analyze_cmd->add_option("--area", momentum.area, "active, passive or both")
      ->check(CLI::IsMember({"active", "passive", "both"}));

  auto* detect_cmd = app.add_subcommand("detect", "Rank anomalous buckets and trace the orders inside them");
  add_input_options(*detect_cmd, common);
  add_momentum_options(*detect_cmd, momentum);
  add_detect_options(*detect_cmd, det);
  detect_cmd->add_option("--detector", det.detector, "momentum-deviation, zscore or both")
      ->check(CLI::IsMember({"momentum-deviation", "zscore", "both"}));

  auto* compare_cmd = app.add_subcommand("compare", "Run both detectors and print a side-by-side ranking");
  add_input_options(*compare_cmd, common);
  add_momentum_options(*compare_cmd, momentum);
  add_detect_options(*compare_cmd, det);

  auto* inject_cmd = app.add_subcommand("inject", "Insert spoofing patterns into a stream");
  add_input_options(*inject_cmd, common);
  inject_cmd->add_option("--spec", inj.specs, "Spoof spec JSON file (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  inject_cmd->add_option("--out-format", inj.out_format, "canonical-csv or canonical-jsonl");

  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic background stream");
  add_precision_options(*generate_cmd, common);
  generate_cmd->add_option("--seed", gen.seed, "PRNG seed");
  generate_cmd->add_option("--duration", gen.duration, "Stream length in seconds");
  generate_cmd->add_option("--rate", gen.rate, "Order arrivals per second")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--quote-move-probability", gen.quote_move_probability,
                           "Chance of a one-tick quote move per arrival")
      ->check(CLI::Range(0.0, 1.0));
  generate_cmd->add_option("--active-fraction", gen.active_fraction, "Share of limit orders placed in the active area")
      ->check(CLI::Range(0.0, 1.0));
  generate_cmd->add_option("--start", gen.start, "First timestamp");
  generate_cmd->add_option("--spec", inj.specs, "Spoof spec JSON file to inject (repeatable)")
      ->check(CLI::ExistingFile);
  generate_cmd->add_option("--out-format", inj.out_format, "canonical-csv or canonical-jsonl");

  auto* validate_cmd = app.add_subcommand("validate", "Report parse and stream consistency statistics");
  add_input_options(*validate_cmd, common);

  try {
    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(common, momentum, out, err);
    if (*detect_cmd) return cmd_detect(common, momentum, det, out, err);
    if (*compare_cmd) return cmd_compare(common, momentum, det, out, err);
    if (*inject_cmd) return cmd_inject(common, inj, out, err);
    if (*generate_cmd) return cmd_generate(common, gen, inj, out, err);
    if (*validate_cmd) return cmd_validate(common, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ConsistencyError& e) {
    err << "inconsistent stream: " << e.what() << '\n';
    return kExitParse;
  } catch (const ContractError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitContract;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitContract;
  }
  return kExitUsage;
}

}  // namespace lobm::cli
