#include "lobm/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

namespace lobm {
namespace {

constexpr int kMarginLeft = 90;
constexpr int kMarginRight = 80;
constexpr int kMarginTop = 40;
constexpr int kPanelGap = 50;

struct Point {
  double x;
  double y;
};

std::string num(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", v);
  return buf.data();
}

std::string label(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.4g", v);
  return buf.data();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Reduce (t, v) to at most two points per pixel column, keeping extremes.
std::vector<Point> envelope(const std::vector<Point>& pts, double x0, double x1, int columns) {
  if (pts.size() <= static_cast<std::size_t>(2 * columns) || x1 <= x0) return pts;
  std::vector<Point> out;
  std::size_t i = 0;
  for (int c = 0; c < columns && i < pts.size(); ++c) {
    const double edge = x0 + (x1 - x0) * (c + 1) / columns;
    Point lo{0, std::numeric_limits<double>::infinity()};
    Point hi{0, -std::numeric_limits<double>::infinity()};
    bool any = false;
    for (; i < pts.size() && (pts[i].x <= edge || c == columns - 1); ++i) {
      any = true;
      if (pts[i].y < lo.y) lo = pts[i];
      if (pts[i].y > hi.y) hi = pts[i];
    }
    if (!any) continue;
    if (lo.x <= hi.x) {
      out.push_back(lo);
      if (hi.x != lo.x || hi.y != lo.y) out.push_back(hi);
    } else {
      out.push_back(hi);
      out.push_back(lo);
    }
  }
  return out;
}

void polyline(std::ostringstream& svg, const std::vector<Point>& pts, double t0, double t1, double v0, double v1,
              int left, int top, int w, int h, const char* style) {
  if (pts.empty()) return;
  const double tspan = t1 > t0 ? t1 - t0 : 1.0;
  const double vspan = v1 > v0 ? v1 - v0 : 1.0;
  svg << "<polyline fill=\"none\" " << style << " points=\"";
  bool first = true;
  for (const Point& p : pts) {
    const double x = left + (p.x - t0) / tspan * w;
    const double y = top + h - (p.y - v0) / vspan * h;
    if (!first) svg << ' ';
    svg << num(x) << ',' << num(y);
    first = false;
  }
  svg << "\"/>\n";
}

}  // namespace

std::string render_momentum_svg(std::span<const MomentumSample> samples, std::span<const Bucket> buckets,
                                const AreaConfig& cfg, const SvgOptions& options) {
  const int plot_w = options.width - kMarginLeft - kMarginRight;
  const int panels = options.separated ? 2 : 1;
  const int height = kMarginTop + panels * options.panel_height + (panels - 1) * kPanelGap + 40;

  const auto cum = cumulative_series(samples);
  double t0 = 0;
  double t1 = 1;
  if (!buckets.empty()) {
    t0 = static_cast<double>(buckets.front().end) / kMicrosPerSecond;
    t1 = static_cast<double>(buckets.back().end) / kMicrosPerSecond;
  }

  std::vector<Point> mid;
  for (const Bucket& b : buckets) {
    if (b.ref_quotes) {
      mid.push_back({static_cast<double>(b.end) / kMicrosPerSecond,
                     midprice(*b.ref_quotes).ticks() * cfg.tick_size.unit_value()});
    }
  }
  mid = envelope(mid, t0, t1, plot_w);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << options.width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  if (!options.metadata.empty()) svg << "<metadata>" << escape(options.metadata) << "</metadata>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << options.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(options.title) << "</text>\n";

  struct Panel {
    const char* name;
    RawMomentum CumulativeSample::*field;
  };
  std::vector<Panel> defs;
  if (options.separated) {
    defs = {{"limit orders", &CumulativeSample::cum_limit}, {"market orders", &CumulativeSample::cum_market}};
  } else {
    defs = {{"all orders", &CumulativeSample::cum_total}};
  }

  double mid_lo = std::numeric_limits<double>::infinity();
  double mid_hi = -std::numeric_limits<double>::infinity();
  for (const Point& p : mid) {
    mid_lo = std::min(mid_lo, p.y);
    mid_hi = std::max(mid_hi, p.y);
  }

  for (int k = 0; k < panels; ++k) {
    const int top = kMarginTop + k * (options.panel_height + kPanelGap);
    const int h = options.panel_height;
    std::vector<Point> pts;
    pts.reserve(cum.size());
    for (const CumulativeSample& c : cum) {
      pts.push_back({static_cast<double>(c.bucket_end) / kMicrosPerSecond, momentum_value(c.*(defs[k].field), cfg)});
    }
    pts = envelope(pts, t0, t1, plot_w);
    double v0 = 0;
    double v1 = 0;
    for (const Point& p : pts) {
      v0 = std::min(v0, p.y);
      v1 = std::max(v1, p.y);
    }
    if (v1 == v0) v1 = v0 + 1;

    svg << "<g>\n";
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << h
        << "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << kMarginLeft + 4 << "\" y=\"" << top + 14 << "\">cumulative net momentum, "
        << defs[k].name << "</text>\n";
    svg << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">" << label(v1)
        << "</text>\n";
    svg << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << top + h << "\" text-anchor=\"end\">" << label(v0)
        << "</text>\n";
    if (v0 < 0 && v1 > 0) {
      const double zy = top + h - (0 - v0) / (v1 - v0) * h;
      svg << "<line x1=\"" << kMarginLeft << "\" x2=\"" << kMarginLeft + plot_w << "\" y1=\"" << num(zy)
          << "\" y2=\"" << num(zy) << "\" stroke=\"#ccc\"/>\n";
    }
    polyline(svg, pts, t0, t1, v0, v1, kMarginLeft, top, plot_w, h, "stroke=\"#1f77b4\" stroke-width=\"1.2\"");
    if (!mid.empty()) {
      polyline(svg, mid, t0, t1, mid_lo, mid_hi, kMarginLeft, top, plot_w, h,
               "stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"4 2\"");
      svg << "<text x=\"" << kMarginLeft + plot_w + 6 << "\" y=\"" << top + 10 << "\">" << label(mid_hi)
          << "</text>\n";
      svg << "<text x=\"" << kMarginLeft + plot_w + 6 << "\" y=\"" << top + h << "\">" << label(mid_lo)
          << "</text>\n";
    }
    svg << "</g>\n";
  }
  const int axis_y = kMarginTop + panels * options.panel_height + (panels - 1) * kPanelGap + 16;
  if (!buckets.empty()) {
    svg << "<text x=\"" << kMarginLeft << "\" y=\"" << axis_y << "\">" << format_timestamp(buckets.front().end)
        << "</text>\n";
    svg << "<text x=\"" << kMarginLeft + plot_w << "\" y=\"" << axis_y << "\" text-anchor=\"end\">"
        << format_timestamp(buckets.back().end) << "</text>\n";
  }
  svg << "<text x=\"" << options.width - kMarginRight + 6 << "\" y=\"" << axis_y
      << "\" fill=\"#d62728\">midprice</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace lobm
