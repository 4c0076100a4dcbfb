#pragma once

// Minimal hand-emitted SVG line charts: axes, tick labels, polyline series,
// legend. Good enough to eyeball trajectories and collapses; not a plotting
// library.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace semantica {

class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

  void add_series(std::string label, std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size())
      throw std::invalid_argument("SvgPlot: series length mismatch");
    series_.push_back({std::move(label), std::move(xs), std::move(ys), false});
  }

  void add_points(std::string label, std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size())
      throw std::invalid_argument("SvgPlot: series length mismatch");
    series_.push_back({std::move(label), std::move(xs), std::move(ys), true});
  }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write(out);
  }

  void write(std::ostream& out) const {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Series& s : series_)
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        xmin = std::min(xmin, s.xs[i]);
        xmax = std::max(xmax, s.xs[i]);
        ymin = std::min(ymin, s.ys[i]);
        ymax = std::max(ymax, s.ys[i]);
      }
    if (xmin > xmax) {
      xmin = 0.0;
      xmax = 1.0;
    }
    if (ymin > ymax) {
      ymin = 0.0;
      ymax = 1.0;
    }
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
    const double pad_y = 0.05 * (ymax - ymin);
    ymin -= pad_y;
    ymax += pad_y;

    const double w = 760, h = 480, ml = 70, mr = 170, mt = 40, mb = 55;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
        << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-size=\"15\" font-family=\"sans-serif\">" << title_ << "</text>\n";

    // Axes.
    out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
        << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    char buf[64];
    for (int k = 0; k <= 4; ++k) {
      const double xv = xmin + k * (xmax - xmin) / 4.0;
      const double yv = ymin + k * (ymax - ymin) / 4.0;
      std::snprintf(buf, sizeof(buf), "%.4g", xv);
      out << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 18
          << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
          << buf << "</text>\n";
      out << "<line x1=\"" << px(xv) << "\" y1=\"" << h - mb << "\" x2=\"" << px(xv)
          << "\" y2=\"" << h - mb + 4 << "\" stroke=\"black\"/>\n";
      std::snprintf(buf, sizeof(buf), "%.4g", yv);
      out << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
          << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << buf
          << "</text>\n";
      out << "<line x1=\"" << ml - 4 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml
          << "\" y2=\"" << py(yv) << "\" stroke=\"black\"/>\n";
    }
    out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 14
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
        << xlabel_ << "</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + h - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 18 " << (mt + h - mb) / 2 << ")\">" << ylabel_
        << "</text>\n";

    // Series and legend.
    for (std::size_t si = 0; si < series_.size(); ++si) {
      const Series& s = series_[si];
      const std::string color = kColors[si % kColors.size()];
      if (s.points) {
        for (std::size_t i = 0; i < s.xs.size(); ++i)
          out << "<circle cx=\"" << px(s.xs[i]) << "\" cy=\"" << py(s.ys[i])
              << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      } else {
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.xs.size(); ++i)
          out << px(s.xs[i]) << ',' << py(s.ys[i]) << ' ';
        out << "\"/>\n";
      }
      const double ly = mt + 16.0 * static_cast<double>(si);
      out << "<line x1=\"" << w - mr + 10 << "\" y1=\"" << ly + 8 << "\" x2=\""
          << w - mr + 34 << "\" y2=\"" << ly + 8 << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << w - mr + 40 << "\" y=\"" << ly + 12
          << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
  }

 private:
  struct Series {
    std::string label;
    std::vector<double> xs, ys;
    bool points;
  };

  static inline const std::vector<std::string> kColors = {
      "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
      "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};

  std::string title_, xlabel_, ylabel_;
  std::vector<Series> series_;
};

}  // namespace semantica
