#pragma once

// Minimal SVG line/marker plots of CSV series.

#include <string>
#include <vector>

namespace gradsense::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  ///< dots instead of a line
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<double> vertical_markers;  ///< dashed lines at these x
};

std::string render_svg(const PlotSpec& plot);
void write_svg(const std::string& path, const PlotSpec& plot);

}  // namespace gradsense::cli
