#include "gfrag/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace gfrag::cli {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_svg(const LinePlot& plot) {
  const double left = 70.0;
  const double right = 160.0;
  const double top = 40.0;
  const double bottom = 50.0;
  const double w = plot.width - left - right;
  const double h = plot.height - top - bottom;

  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (const auto& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x1 > x0)) {
    x0 = std::isfinite(x0) ? x0 - 1.0 : 0.0;
    x1 = x0 + 2.0;
  }
  if (!(y1 > y0)) {
    y0 = std::isfinite(y0) ? y0 - 1.0 : 0.0;
    y1 = y0 + 2.0;
  }
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * w; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * h; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << plot.width << "\" height=\""
      << plot.height << "\" viewBox=\"0 0 " << plot.width << ' ' << plot.height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << plot.width << "\" height=\"" << plot.height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << coord(left + w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"15\">" << xml_escape(plot.title) << "</text>\n";

  // Axes box and extreme tick labels.
  out << "<rect x=\"" << coord(left) << "\" y=\"" << coord(top) << "\" width=\"" << coord(w) << "\" height=\""
      << coord(h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<text x=\"" << coord(left) << "\" y=\"" << coord(top + h + 16) << "\" text-anchor=\"start\">" << num(x0)
      << "</text>\n";
  out << "<text x=\"" << coord(left + w) << "\" y=\"" << coord(top + h + 16) << "\" text-anchor=\"end\">" << num(x1)
      << "</text>\n";
  out << "<text x=\"" << coord(left - 6) << "\" y=\"" << coord(top + h) << "\" text-anchor=\"end\">" << num(y0)
      << "</text>\n";
  out << "<text x=\"" << coord(left - 6) << "\" y=\"" << coord(top + 10) << "\" text-anchor=\"end\">" << num(y1)
      << "</text>\n";
  out << "<text x=\"" << coord(left + w / 2) << "\" y=\"" << coord(top + h + 36) << "\" text-anchor=\"middle\">"
      << xml_escape(plot.x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << coord(top + h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << coord(top + h / 2) << ")\">" << xml_escape(plot.y_label) << "</text>\n";
  out << "</g>\n";

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << (first ? "" : " ") << coord(px(s.x[i])) << ',' << coord(py(s.y[i]));
      first = false;
    }
    out << "\"/>\n";
    const double ly = top + 14.0 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << coord(left + w + 12) << "\" y1=\"" << coord(ly - 4) << "\" x2=\"" << coord(left + w + 32)
        << "\" y2=\"" << coord(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << coord(left + w + 36) << "\" y=\"" << coord(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace gfrag::cli
