#include "smmevo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace smmevo::svg {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 180;
constexpr double kTop = 40;
constexpr double kBottom = 55;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-3)) {
    std::snprintf(buf, sizeof buf, "%.0e", v);
  } else {
    std::snprintf(buf, sizeof buf, "%g", v);
  }
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
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

std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (const double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step - 1e-9) * step; v <= hi + 1e-9 * step; v += step) {
    t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return t;
}

struct Frame {
  double x0, x1, y0, y1;
  bool log_x;

  double px(double x) const {
    const double a = log_x ? std::log10(x) : x;
    const double b0 = log_x ? std::log10(x0) : x0;
    const double b1 = log_x ? std::log10(x1) : x1;
    return kLeft + (a - b0) / (b1 - b0) * (kWidth - kLeft - kRight);
  }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::pair<double, double> pad(double lo, double hi) {
  if (!(hi > lo)) return {lo - 0.5, hi + 0.5};
  return {lo, hi};
}

std::string open_document(const Axes& axes, const Frame& f) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(axes.title) +
       "</text>\n";
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(plot_w) + "\" height=\"" +
       num(plot_h) + "\" fill=\"none\" stroke=\"#333\"/>\n";

  std::vector<double> xt;
  if (f.log_x) {
    for (double d = std::ceil(std::log10(f.x0) - 1e-9); d <= std::log10(f.x1) + 1e-9; d += 1.0) {
      xt.push_back(std::pow(10.0, d));
    }
  } else {
    xt = nice_ticks(f.x0, f.x1);
  }
  for (const double t : xt) {
    const double x = f.px(t);
    s += "<line x1=\"" + num(x) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" + num(x) + "\" y2=\"" +
         num(kHeight - kBottom + 5) + "\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + num(x) + "\" y=\"" + num(kHeight - kBottom + 18) + "\" text-anchor=\"middle\">" +
         tick_label(t) + "</text>\n";
  }
  for (const double t : nice_ticks(f.y0, f.y1)) {
    const double y = f.py(t);
    s += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(y) +
         "\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + tick_label(t) +
         "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">" +
       escape(axes.x_label) + "</text>\n";
  s += "<text transform=\"translate(18," + num(kTop + plot_h / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(axes.y_label) + "</text>\n";
  return s;
}

std::string legend(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string s;
  double y = kTop + 10;
  for (const auto& [name, color] : entries) {
    const double x = kWidth - kRight + 12;
    s += "<line x1=\"" + num(x) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x + 20) + "\" y2=\"" + num(y) +
         "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(x + 26) + "\" y=\"" + num(y + 4) + "\">" + escape(name) + "</text>\n";
    y += 18;
  }
  return s;
}

std::string polyline(const Frame& f, const Series& s) {
  std::string pts;
  for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
    if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k]) || (f.log_x && s.x[k] <= 0.0)) continue;
    if (!pts.empty()) pts += ' ';
    pts += num(f.px(s.x[k])) + "," + num(f.py(std::clamp(s.y[k], f.y0, f.y1)));
  }
  return "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
}

}  // namespace

std::string line_chart(const Axes& axes, const std::vector<Series>& series) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k]) || (axes.log_x && s.x[k] <= 0.0)) continue;
      xlo = std::min(xlo, s.x[k]);
      xhi = std::max(xhi, s.x[k]);
      ylo = std::min(ylo, s.y[k]);
      yhi = std::max(yhi, s.y[k]);
    }
  }
  if (!std::isfinite(xlo)) {  // nothing plottable
    xlo = axes.log_x ? 1.0 : 0.0;
    xhi = axes.log_x ? 10.0 : 1.0;
    ylo = 0.0;
    yhi = 1.0;
  }
  auto [x0, x1] = axes.x_range.value_or(axes.log_x ? std::pair{xlo, xhi} : pad(xlo, xhi));
  if (axes.log_x && !(x1 > x0)) x1 = x0 * 10.0;
  const auto [y0, y1] = axes.y_range.value_or(pad(ylo, yhi));
  const Frame f{x0, x1, y0, y1, axes.log_x};
  std::string doc = open_document(axes, f);
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& s : series) {
    doc += polyline(f, s);
    entries.emplace_back(s.name, s.color);
  }
  doc += legend(entries);
  doc += "</svg>\n";
  return doc;
}

std::string bar_chart(const Axes& axes, const std::vector<double>& edges, const std::vector<double>& heights,
                      const std::optional<Series>& reference, const std::string& color) {
  if (edges.size() != heights.size() + 1) throw std::invalid_argument("bar_chart: need one more edge than bar");
  double yhi = 0.0;
  for (const double h : heights) yhi = std::max(yhi, h);
  if (reference) {
    for (const double v : reference->y) {
      if (std::isfinite(v)) yhi = std::max(yhi, v);
    }
  }
  if (!(yhi > 0.0)) yhi = 1.0;
  const auto [x0, x1] = axes.x_range.value_or(pad(edges.front(), edges.back()));
  const auto [y0, y1] = axes.y_range.value_or(std::pair{0.0, yhi * 1.1});
  const Frame f{x0, x1, y0, y1, false};
  std::string doc = open_document(axes, f);
  for (std::size_t b = 0; b < heights.size(); ++b) {
    const double left = f.px(edges[b]);
    const double right = f.px(edges[b + 1]);
    const double top = f.py(std::min(heights[b], y1));
    doc += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(std::max(0.0, right - left - 1)) +
           "\" height=\"" + num(f.py(y0) - top) + "\" fill=\"" + color + "\"/>\n";
  }
  if (reference) {
    doc += polyline(f, *reference);
    doc += legend({{reference->name, reference->color}});
  }
  doc += "</svg>\n";
  return doc;
}

std::string histogram(const Axes& axes, const std::vector<double>& values, std::size_t bins, double lo, double hi) {
  if (bins == 0 || !(hi > lo)) throw std::invalid_argument("histogram: need bins >= 1 and hi > lo");
  std::vector<double> edges(bins + 1), counts(bins, 0.0);
  for (std::size_t b = 0; b <= bins; ++b) edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  for (const double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    const auto b = std::min(bins - 1, static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins)));
    counts[b] += 1.0;
  }
  return bar_chart(axes, edges, counts);
}

void write_file(const std::string& path, const std::string& document) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << document;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace smmevo::svg
