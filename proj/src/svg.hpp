#pragma once
#include <string>
#include <vector>

namespace spduff {

/// Minimal SVG line-plot writer: fixed viewport panels with axes, tick
/// labels, polylines and dashed variants. Output is deterministic.
class SvgPlot {
public:
  SvgPlot(int width, int height, std::string title);

  struct Series {
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f77b4";
    bool dashed = false;
  };

  /// Adds one panel with its own data ranges; panels are laid out left to
  /// right. Axis labels are drawn under/next to the frame.
  void add_panel(const std::string& x_label, const std::string& y_label,
                 std::vector<Series> series, const std::string& caption = "");

  std::string render() const;
  void write(const std::string& path) const;

private:
  struct Panel {
    std::string x_label, y_label, caption;
    std::vector<Series> series;
  };
  int width_, height_;
  std::string title_;
  std::vector<Panel> panels_;
};

}  // namespace spduff
