#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "cuspflat/mapping.hpp"

namespace cuspflat {

// Images under the cusp map of a polar grid of the unit disk, plus the image
// of the cusp boundary (which lands on the rays |y| = x of the model wedge).
struct GridLines {
  std::vector<std::vector<PlanePoint>> circles;
  std::vector<std::vector<PlanePoint>> rays;
  std::vector<PlanePoint> cusp_upper;
  std::vector<PlanePoint> cusp_lower;
};

inline GridLines deformed_grid(const CuspMap& map, std::size_t resolution) {
  if (resolution < 4) throw std::invalid_argument("deformed_grid: resolution >= 4");
  GridLines g;
  const std::size_t n_rays = resolution;
  const std::size_t n_circles = std::max<std::size_t>(resolution / 4, 3);
  const std::size_t samples = 4 * resolution;
  const double r_min = 1e-3, r_max = 1.0 - 1e-6;

  for (std::size_t i = 1; i <= n_circles; ++i) {
    const double r = static_cast<double>(i) / (n_circles + 1);
    std::vector<PlanePoint> line;
    line.reserve(samples + 1);
    for (std::size_t j = 0; j <= samples; ++j) {
      const double theta = 2.0 * kPi * static_cast<double>(j) / samples;
      line.push_back(map.forward(PolarPoint(r, theta).to_plane()));
    }
    g.circles.push_back(std::move(line));
  }
  for (std::size_t j = 0; j < n_rays; ++j) {
    const double theta = 2.0 * kPi * static_cast<double>(j) / n_rays;
    std::vector<PlanePoint> line;
    line.reserve(samples + 1);
    for (std::size_t i = 0; i <= samples; ++i) {
      const double r =
          r_min * std::pow(r_max / r_min, static_cast<double>(i) / samples);
      line.push_back(map.forward(PolarPoint(r, theta).to_plane()));
    }
    g.rays.push_back(std::move(line));
  }
  const double x_max = solve_t(r_max, map.beta());
  for (std::size_t i = 0; i <= samples; ++i) {
    const double x = x_max * std::pow(1e-3, 1.0 - static_cast<double>(i) / samples);
    g.cusp_upper.push_back(map.forward({x, std::pow(x, map.beta())}));
    g.cusp_lower.push_back(map.forward({x, -std::pow(x, map.beta())}));
  }
  return g;
}

namespace detail {

inline void append_path(std::string& out, const std::vector<PlanePoint>& line,
                        const char* style) {
  char buf[64];
  out += "<path fill=\"none\" ";
  out += style;
  out += " d=\"";
  for (std::size_t i = 0; i < line.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%c%.5f %.5f", i == 0 ? 'M' : 'L', line[i].x,
                  -line[i].y);
    out += buf;
  }
  out += "\"/>\n";
}

}  // namespace detail

// SVG 1.1 document, one path per grid line; the cusp boundary image is
// highlighted. The y axis is flipped into SVG screen coordinates.
inline std::string to_svg(const GridLines& grid) {
  std::string out;
  out +=
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      "viewBox=\"-1.15 -1.15 2.3 2.3\" width=\"640\" height=\"640\">\n"
      "<rect x=\"-1.15\" y=\"-1.15\" width=\"2.3\" height=\"2.3\" fill=\"white\"/>\n";
  for (const auto& line : grid.circles)
    detail::append_path(out, line, "stroke=\"#4477aa\" stroke-width=\"0.004\"");
  for (const auto& line : grid.rays)
    detail::append_path(out, line, "stroke=\"#777777\" stroke-width=\"0.004\"");
  detail::append_path(out, grid.cusp_upper, "stroke=\"#cc3311\" stroke-width=\"0.008\"");
  detail::append_path(out, grid.cusp_lower, "stroke=\"#cc3311\" stroke-width=\"0.008\"");
  out += "</svg>\n";
  return out;
}

}  // namespace cuspflat
