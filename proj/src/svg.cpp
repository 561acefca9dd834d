#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "error.hpp"

namespace spduff {

namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

SvgPlot::SvgPlot(int width, int height, std::string title)
    : width_(width), height_(height), title_(std::move(title)) {}

void SvgPlot::add_panel(const std::string& x_label, const std::string& y_label,
                        std::vector<Series> series, const std::string& caption) {
  panels_.push_back({x_label, y_label, caption, std::move(series)});
}

std::string SvgPlot::render() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
     << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width_ / 2 << "\" y=\"16\" text-anchor=\"middle\" font-size=\"13\">"
     << title_ << "</text>\n";
  const int n = std::max<std::size_t>(1, panels_.size());
  const double pw = static_cast<double>(width_) / n;
  const double ml = 46, mr = 12, mt = 28, mb = 40;
  for (std::size_t pi = 0; pi < panels_.size(); ++pi) {
    const Panel& panel = panels_[pi];
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Series& s : panel.series) {
      for (auto [x, y] : s.points) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
    if (!(xmin < xmax)) {
      xmin -= 1;
      xmax += 1;
    }
    if (!(ymin < ymax)) {
      ymin -= 1;
      ymax += 1;
    }
    const double pad_y = 0.05 * (ymax - ymin);
    ymin -= pad_y;
    ymax += pad_y;
    const double x0 = pi * pw + ml, x1 = (pi + 1) * pw - mr;
    const double y0 = height_ - mb, y1 = mt;  // svg y grows downward
    auto X = [&](double x) { return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0); };
    auto Y = [&](double y) { return y0 + (y - ymin) / (ymax - ymin) * (y1 - y0); };
    os << "<rect x=\"" << px(x0) << "\" y=\"" << px(y1) << "\" width=\"" << px(x1 - x0)
       << "\" height=\"" << px(y0 - y1) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {  // ticks
      const double xv = xmin + (xmax - xmin) * k / 4;
      const double yv = ymin + (ymax - ymin) * k / 4;
      os << "<text x=\"" << px(X(xv)) << "\" y=\"" << px(y0 + 14)
         << "\" text-anchor=\"middle\" font-size=\"9\">" << tick(xv) << "</text>\n";
      os << "<text x=\"" << px(x0 - 4) << "\" y=\"" << px(Y(yv) + 3)
         << "\" text-anchor=\"end\" font-size=\"9\">" << tick(yv) << "</text>\n";
    }
    os << "<text x=\"" << px(0.5 * (x0 + x1)) << "\" y=\"" << px(y0 + 28)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << panel.x_label << "</text>\n";
    os << "<text x=\"" << px(x0 - 34) << "\" y=\"" << px(0.5 * (y0 + y1))
       << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 " << px(x0 - 34) << " "
       << px(0.5 * (y0 + y1)) << ")\">" << panel.y_label << "</text>\n";
    if (!panel.caption.empty())
      os << "<text x=\"" << px(0.5 * (x0 + x1)) << "\" y=\"" << px(y1 - 6)
         << "\" text-anchor=\"middle\" font-size=\"10\">" << panel.caption << "</text>\n";
    for (const Series& s : panel.series) {
      if (s.points.empty()) continue;
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\"";
      if (s.dashed) os << " stroke-dasharray=\"4 3\"";
      os << " points=\"";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i) os << ' ';
        os << px(X(s.points[i].first)) << ',' << px(Y(std::clamp(s.points[i].second, ymin, ymax)));
      }
      os << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

void SvgPlot::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::io, "cannot write '" + path + "'");
  out << render();
}

}  // namespace spduff
