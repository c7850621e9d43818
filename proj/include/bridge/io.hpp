#pragma once

// CSV and SVG text builders. Numbers are printed with %.17g so that a
// CSV round-trips every double bit-exactly.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::io {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ += ',';
      out_ += header[i];
    }
    out_ += '\n';
    columns_ = header.size();
  }

  /// Appends one row; cells are either numbers or preformatted text.
  CsvWriter& row(const std::vector<double>& cells) {
    check(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += fmt(cells[i]);
    }
    out_ += '\n';
    return *this;
  }

  CsvWriter& raw_row(const std::vector<std::string>& cells) {
    check(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
    return *this;
  }

  std::size_t columns() const { return columns_; }
  const std::string& str() const { return out_; }

 private:
  void check(std::size_t n) const {
    if (n != columns_) throw std::invalid_argument("csv row has the wrong number of cells");
  }

  std::string out_;
  std::size_t columns_ = 0;
};

struct Series {
  std::string name;
  std::vector<double> x, y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  /// Values beyond +-y_clip are clamped before scaling (blow-up plots).
  double y_clip = std::numeric_limits<double>::infinity();
  int width = 800, height = 450;
};

namespace detail {

inline std::string escape(std::string_view s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace detail

/// Line plot of one or more series as SVG polylines with a framed axis box.
inline std::string svg_plot(const std::vector<Series>& series, const PlotOptions& opt) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto clip = [&](double v) { return std::clamp(v, -opt.y_clip, opt.y_clip); };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, clip(s.y[i]));
      y1 = std::max(y1, clip(s.y[i]));
    }
  }
  if (!(x1 > x0)) {
    x0 = std::isfinite(x0) ? x0 - 1 : 0;
    x1 = x0 + 2;
  }
  if (!(y1 > y0)) {
    y0 = std::isfinite(y0) ? y0 - 1 : -1;
    y1 = y0 + 2;
  }
  auto X = [&](double v) { return ml + (v - x0) / (x1 - x0) * pw; };
  auto Y = [&](double v) { return mt + (y1 - clip(v)) / (y1 - y0) * ph; };

  char buf[256];
  std::string o;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                opt.width, opt.height, opt.width, opt.height);
  o += buf;
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                ml, mt, pw, ph);
  o += buf;
  if (!opt.title.empty()) {
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">", ml);
    o += buf;
    o += detail::escape(opt.title) + "</text>\n";
  }
  if (y0 < 0.0 && y1 > 0.0) {
    std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#bbb\"/>\n", ml, Y(0.0),
                  ml + pw, Y(0.0));
    o += buf;
  }
  auto label = [&](double x, double y, const std::string& s, const char* anchor) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"%s\">", x, y,
                  anchor);
    o += buf;
    o += detail::escape(s) + "</text>\n";
  };
  label(ml, mt + ph + 18, fmt_short(x0), "start");
  label(ml + pw, mt + ph + 18, fmt_short(x1), "end");
  label(ml - 6, mt + 12, fmt_short(y1), "end");
  label(ml - 6, mt + ph, fmt_short(y0), "end");
  label(ml + pw / 2, mt + ph + 38, opt.x_label, "middle");
  if (!opt.y_label.empty()) label(ml - 6, mt + ph / 2, opt.y_label, "end");

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    o += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"";
    o += colors[k % 6];
    o += "\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(s.x[i]), Y(s.y[i]));
      o += buf;
    }
    o += "\"/>\n";
    if (!s.name.empty()) {
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" fill=\"%s\">", ml + pw - 120,
                    mt + 16 + 14 * static_cast<double>(k), colors[k % 6]);
      o += buf;
      o += detail::escape(s.name) + "</text>\n";
    }
  }
  o += "</svg>\n";
  return o;
}

}  // namespace bridge::io
