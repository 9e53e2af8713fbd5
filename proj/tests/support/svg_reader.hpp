#pragma once

// Minimal reader for the SVG files written by the figure command: polyline
// points by id, and the affine map back to model coordinates recovered from
// the axis-range description and the real-axis baseline.

#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "loewner/types.hpp"

namespace loewner::testing {

struct SvgFigure {
  std::map<std::string, std::vector<Complex>> polylines;  // canvas coordinates
  double x_min = 0.0, x_max = 0.0;
  double base_x0 = 0.0, base_x1 = 0.0, base_y = 0.0;
  bool has_caption = false;

  [[nodiscard]] Complex to_model(Complex p) const {
    const double scale = (base_x1 - base_x0) / (x_max - x_min);
    return {x_min + (p.real() - base_x0) / scale, (base_y - p.imag()) / scale};
  }
};

inline SvgFigure read_svg(const std::string& svg) {
  SvgFigure fig;
  std::smatch m;
  const std::regex range(R"(<desc id="axis-range">(\S+) (\S+) (\S+) (\S+)</desc>)");
  if (std::regex_search(svg, m, range)) {
    fig.x_min = std::stod(m[1].str());
    fig.x_max = std::stod(m[2].str());
  }
  const std::regex base(R"re(<line id="baseline" x1="([^"]+)" y1="([^"]+)" x2="([^"]+)")re");
  if (std::regex_search(svg, m, base)) {
    fig.base_x0 = std::stod(m[1].str());
    fig.base_y = std::stod(m[2].str());
    fig.base_x1 = std::stod(m[3].str());
  }
  const std::regex poly(R"re(<polyline id="([^"]+)"[^>]*points="([^"]*)")re");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly);
       it != std::sregex_iterator(); ++it) {
    std::vector<Complex> pts;
    std::istringstream in((*it)[2].str());
    for (std::string pair; in >> pair;) {
      const auto comma = pair.find(',');
      pts.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
    fig.polylines[(*it)[1].str()] = std::move(pts);
  }
  fig.has_caption = svg.find("<text id=\"caption\"") != std::string::npos;
  return fig;
}

}  // namespace loewner::testing
