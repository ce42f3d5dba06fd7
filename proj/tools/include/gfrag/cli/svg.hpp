#pragma once

#include <string>
#include <vector>

namespace gfrag::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line plot: axes, min/max tick labels, one polyline per series.
struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  int width = 800;
  int height = 500;
};

/// Standalone SVG 1.1 document.
std::string render_svg(const LinePlot& plot);

std::string xml_escape(const std::string& s);

}  // namespace gfrag::cli
