#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "csei/csv.hpp"

namespace csei {

// Self-contained SVG line/stack charts. Convenience output only; nothing
// downstream parses these.

struct ChartSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartMarker {
  double x = 0.0;
  double y = 0.0;
  std::string color;
  bool vertical_line = false;  // event-style marker spanning the plot height
};

namespace detail {

inline std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct ChartScale {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  double left = 60.0, top = 40.0, width = 760.0, height = 360.0;

  double sx(double x) const {
    const double span = xmax > xmin ? xmax - xmin : 1.0;
    return left + (x - xmin) / span * width;
  }
  double sy(double y) const {
    const double span = ymax > ymin ? ymax - ymin : 1.0;
    return top + height - (y - ymin) / span * height;
  }
};

inline void chart_bounds(const std::vector<ChartSeries>& series,
                         ChartScale& scale) {
  bool first = true;
  for (const ChartSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        scale.xmin = scale.xmax = s.x[i];
        scale.ymin = scale.ymax = s.y[i];
        first = false;
      }
      scale.xmin = std::min(scale.xmin, s.x[i]);
      scale.xmax = std::max(scale.xmax, s.x[i]);
      scale.ymin = std::min(scale.ymin, s.y[i]);
      scale.ymax = std::max(scale.ymax, s.y[i]);
    }
  }
}

inline void chart_frame(std::ostream& os, const std::string& title,
                        const ChartScale& s) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" "
        "height=\"460\" viewBox=\"0 0 880 460\">\n";
  os << "<rect width=\"880\" height=\"460\" fill=\"white\"/>\n";
  os << "<text x=\"440\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << title << "</text>\n";
  os << "<rect x=\"" << px(s.left) << "\" y=\"" << px(s.top) << "\" width=\""
     << px(s.width) << "\" height=\"" << px(s.height)
     << "\" fill=\"none\" stroke=\"#444\"/>\n";
  const auto axis_label = [&](double xpix, double ypix, double value,
                              const char* anchor) {
    os << "<text x=\"" << px(xpix) << "\" y=\"" << px(ypix) << "\" "
       << "text-anchor=\"" << anchor
       << "\" font-family=\"sans-serif\" font-size=\"11\">"
       << format_double(value) << "</text>\n";
  };
  axis_label(s.left - 6, s.top + s.height, s.ymin, "end");
  axis_label(s.left - 6, s.top + 10, s.ymax, "end");
  axis_label(s.left, s.top + s.height + 16, s.xmin, "start");
  axis_label(s.left + s.width, s.top + s.height + 16, s.xmax, "end");
}

inline void chart_legend(std::ostream& os,
                         const std::vector<ChartSeries>& series,
                         const ChartScale& s) {
  double y = s.top + 6.0;
  for (const ChartSeries& entry : series) {
    if (entry.label.empty()) continue;
    os << "<text x=\"" << px(s.left + s.width - 200) << "\" y=\"" << px(y)
       << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
       << entry.color << "\">" << entry.label << "</text>\n";
    y += 14.0;
  }
}

}  // namespace detail

inline void write_line_chart(std::ostream& os, const std::string& title,
                             const std::vector<ChartSeries>& series,
                             const std::vector<ChartMarker>& markers = {}) {
  detail::ChartScale scale;
  detail::chart_bounds(series, scale);
  detail::chart_frame(os, title, scale);
  for (const ChartSeries& s : series) {
    if (s.x.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i > 0) os << ' ';
      os << detail::px(scale.sx(s.x[i])) << ',' << detail::px(scale.sy(s.y[i]));
    }
    os << "\"/>\n";
  }
  for (const ChartMarker& m : markers) {
    if (m.vertical_line) {
      os << "<line x1=\"" << detail::px(scale.sx(m.x)) << "\" y1=\""
         << detail::px(scale.top) << "\" x2=\"" << detail::px(scale.sx(m.x))
         << "\" y2=\"" << detail::px(scale.top + scale.height)
         << "\" stroke=\"" << m.color
         << "\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    } else {
      os << "<circle cx=\"" << detail::px(scale.sx(m.x)) << "\" cy=\""
         << detail::px(scale.sy(m.y)) << "\" r=\"3.5\" fill=\"" << m.color
         << "\"/>\n";
    }
  }
  detail::chart_legend(os, series, scale);
  os << "</svg>\n";
}

// Stacked area chart: layers[k][i] is layer k's (non-negative) value at
// x[i]; layers are drawn bottom-up as cumulative bands.
inline void write_stack_chart(std::ostream& os, const std::string& title,
                              const std::vector<double>& x,
                              const std::vector<ChartSeries>& layers) {
  std::vector<double> top(x.size(), 0.0);
  std::vector<std::vector<double>> cumulative;
  cumulative.reserve(layers.size());
  for (const ChartSeries& layer : layers) {
    for (std::size_t i = 0; i < x.size(); ++i) top[i] += layer.y[i];
    cumulative.push_back(top);
  }

  detail::ChartScale scale;
  scale.ymin = 0.0;
  scale.ymax = 1e-9;
  for (double v : top) scale.ymax = std::max(scale.ymax, v);
  if (!x.empty()) {
    scale.xmin = x.front();
    scale.xmax = x.back();
  }
  detail::chart_frame(os, title, scale);

  for (std::size_t k = layers.size(); k-- > 0;) {
    const std::vector<double>& upper = cumulative[k];
    os << "<polygon fill=\"" << layers[k].color
       << "\" fill-opacity=\"0.85\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i > 0) os << ' ';
      os << detail::px(scale.sx(x[i])) << ',' << detail::px(scale.sy(upper[i]));
    }
    for (std::size_t i = x.size(); i-- > 0;) {
      const double lower = k == 0 ? 0.0 : cumulative[k - 1][i];
      os << ' ' << detail::px(scale.sx(x[i])) << ','
         << detail::px(scale.sy(lower));
    }
    os << "\"/>\n";
  }
  detail::chart_legend(os, layers, scale);
  os << "</svg>\n";
}

}  // namespace csei
