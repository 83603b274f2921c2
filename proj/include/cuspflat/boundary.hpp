#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuspflat/geometry.hpp"
#include "cuspflat/numerics.hpp"

namespace cuspflat {

namespace detail {

inline int orient(PlanePoint a, PlanePoint b, PlanePoint c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

inline bool segments_cross(PlanePoint a, PlanePoint b, PlanePoint c, PlanePoint d) {
  return orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0;
}

}  // namespace detail

// Closed counterclockwise polyline with arclength prefix sums.
struct RectifiableCurve {
  std::vector<PlanePoint> vertices;
  std::vector<double> cumulative;  // cumulative[i] = length from vertex 0 to vertex i

  static RectifiableCurve from_vertices(std::vector<PlanePoint> pts, bool validate = true) {
    if (pts.size() < 3) throw std::invalid_argument("RectifiableCurve: need >= 3 vertices");
    RectifiableCurve c;
    c.vertices = std::move(pts);
    c.cumulative.resize(c.vertices.size() + 1, 0.0);
    double signed_area = 0.0;
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
      const PlanePoint& a = c.vertices[i];
      const PlanePoint& b = c.vertices[(i + 1) % c.vertices.size()];
      const double seg = distance(a, b);
      if (seg == 0.0) throw std::invalid_argument("RectifiableCurve: repeated vertex");
      c.cumulative[i + 1] = c.cumulative[i] + seg;
      signed_area += a.x * b.y - b.x * a.y;
    }
    if (validate) {
      if (signed_area <= 0.0)
        throw std::invalid_argument("RectifiableCurve: vertices must run counterclockwise");
      // Pairwise simplicity check, at desk scale only.
      const std::size_t n = c.vertices.size();
      if (n <= 1024) {
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent around the wrap
            if (detail::segments_cross(c.vertices[i], c.vertices[(i + 1) % n],
                                       c.vertices[j], c.vertices[(j + 1) % n]))
              throw std::invalid_argument("RectifiableCurve: self-intersection");
          }
        }
      }
    }
    return c;
  }

  double total_length() const { return cumulative.back(); }

  // Point at arclength s from vertex 0, counterclockwise.
  PlanePoint arclength_point(double s) const {
    if (!(s >= 0.0 && s < total_length()))
      throw std::domain_error("arclength_point: s out of [0, length)");
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - cumulative.begin()) - 1;
    const PlanePoint& a = vertices[i];
    const PlanePoint& b = vertices[(i + 1) % vertices.size()];
    const double seg = cumulative[i + 1] - cumulative[i];
    const double w = (s - cumulative[i]) / seg;
    return {a.x + w * (b.x - a.x), a.y + w * (b.y - a.y)};
  }

  PlanePoint point_mod(double s) const {
    const double l = total_length();
    double m = std::fmod(s, l);
    if (m < 0.0) m += l;
    return arclength_point(m);
  }
};

// Arclength-proportional boundary correspondence between the unit circle and
// a rectifiable curve: the base vertex goes to z = 1 and subarc lengths match
// proportionally, which makes the speed constant at length/(2 pi).
struct BoundaryHomeo {
  const RectifiableCurve* curve = nullptr;
  std::size_t base_index = 0;

  double speed() const { return curve->total_length() / (2.0 * kPi); }

  PlanePoint evaluate_angle(double alpha) const {
    const double s =
        curve->cumulative[base_index] + curve->total_length() * alpha / (2.0 * kPi);
    return curve->point_mod(s);
  }

  PlanePoint evaluate(std::complex<double> z) const {
    return evaluate_angle(canonical_angle(std::arg(z)));
  }

  // Circle preimage angle of the curve point at arclength s.
  double inverse_angle(double s) const {
    return canonical_angle(2.0 * kPi * (s - curve->cumulative[base_index]) /
                           curve->total_length());
  }
};

inline BoundaryHomeo boundary_homeo(const RectifiableCurve& curve, std::size_t base = 0) {
  if (base >= curve.vertices.size()) throw std::invalid_argument("boundary_homeo: bad base");
  return BoundaryHomeo{&curve, base};
}

// Double integral of |log |phi^-1(xi) - phi^-1(eta)|| over the curve, by a
// tensor midpoint rule in arclength. The log singularity along the diagonal
// is handled by integrating the linearized model |log(c |s - s'|)| exactly
// over the diagonal and adjacent cell bands; plain midpoint sampling there
// would not be stable under refinement.
inline double log_condition(const RectifiableCurve& curve, const BoundaryHomeo& homeo,
                            std::size_t n) {
  if (n < 64) throw std::invalid_argument("log_condition: need n >= 64");
  const double l = curve.total_length();
  const double h = l / static_cast<double>(n);
  const double c = 2.0 * kPi / l;  // |phi^-1(xi)-phi^-1(eta)| ~ c |s - s'| near s = s'

  std::vector<double> alphas(n);
  for (std::size_t i = 0; i < n; ++i)
    alphas[i] = homeo.inverse_angle(std::fmod((static_cast<double>(i) + 0.5) * h, l));

  const double log_ch = std::log(c * h);
  const double diag = h * h * (1.5 - log_ch);
  const double adjacent = h * h * (1.5 - 2.0 * std::log(2.0) - log_ch);

  std::vector<double> rows(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t gap = std::min((i + n - j) % n, (j + n - i) % n);
      if (gap == 0) row += diag;
      else if (gap == 1) row += adjacent;
      else {
        const double d = 2.0 * std::abs(std::sin(0.5 * (alphas[i] - alphas[j])));
        row += std::abs(std::log(d)) * h * h;
      }
    }
    rows[i] = row;
  }
  return pairwise_sum(rows);
}

// Douglas double integral over the circle for a boundary map phi given as a
// callable of the angle. The diagonal takes the limit |phi'|^2, supplied by
// speed_sq (pass a negative value to use a central difference).
inline double douglas_integral(const std::function<std::complex<double>(double)>& phi,
                               std::size_t n, double speed_sq = -1.0) {
  if (n < 64) throw std::invalid_argument("douglas_integral: need n >= 64");
  const double h = 2.0 * kPi / static_cast<double>(n);
  std::vector<std::complex<double>> values(n), nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double alpha = (static_cast<double>(i) + 0.5) * h;
    values[i] = phi(alpha);
    nodes[i] = std::polar(1.0, alpha);
  }
  std::vector<double> rows(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        double d2 = speed_sq;
        if (d2 < 0.0) {
          const double alpha = (static_cast<double>(i) + 0.5) * h;
          const double fd = 1e-6;
          d2 = std::norm(phi(alpha + fd) - phi(alpha - fd)) / (4.0 * fd * fd);
        }
        row += d2 * h * h;
      } else {
        const double num = std::norm(values[i] - values[j]);
        const double den = std::norm(nodes[i] - nodes[j]);
        row += num / den * h * h;
      }
    }
    rows[i] = row;
  }
  return pairwise_sum(rows);
}

inline double douglas_integral(const BoundaryHomeo& homeo, std::size_t n) {
  return douglas_integral(
      [&](double alpha) {
        const PlanePoint p = homeo.evaluate_angle(canonical_angle(alpha));
        return std::complex<double>(p.x, p.y);
      },
      n, homeo.speed() * homeo.speed());
}

// ---- curve I/O and stock shapes ----

inline RectifiableCurve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_curve_csv: cannot open " + path);
  std::vector<PlanePoint> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, y;
    if (ls >> x >> y) pts.push_back({x, y});
  }
  return RectifiableCurve::from_vertices(std::move(pts));
}

inline void write_curve_csv(const std::string& path, const RectifiableCurve& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curve_csv: cannot open " + path);
  for (const PlanePoint& p : curve.vertices) out << p.x << "," << p.y << "\n";
}

inline RectifiableCurve make_circle(std::size_t n, double radius = 1.0,
                                    PlanePoint center = {0.0, 0.0}) {
  std::vector<PlanePoint> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return RectifiableCurve::from_vertices(std::move(pts), false);
}

inline RectifiableCurve make_square(double side = 1.0, PlanePoint corner = {0.0, 0.0}) {
  return RectifiableCurve::from_vertices({corner,
                                          {corner.x + side, corner.y},
                                          {corner.x + side, corner.y + side},
                                          {corner.x, corner.y + side}});
}

// Polygonal trace of the inward cusp domain boundary: the two cusp arcs meet
// the circle |z - (1-beta)| = sqrt(beta^2+1) at (1, +-1). Cusp samples are
// quadratically graded toward the tip.
inline RectifiableCurve make_cusp_polygon(double beta, std::size_t n) {
  if (n < 16) throw std::invalid_argument("make_cusp_polygon: need n >= 16");
  const CuspShape shape(beta);
  const std::size_t arc_n = n / 4;
  const std::size_t circ_n = n - 2 * arc_n;
  std::vector<PlanePoint> pts;
  pts.reserve(n + 1);
  pts.push_back({0.0, 0.0});
  for (std::size_t i = 1; i <= arc_n; ++i) {  // upper arc, tip to (1,1)
    const double x = std::pow(static_cast<double>(i) / arc_n, 2.0);
    pts.push_back({x, std::pow(x, beta)});
  }
  const double a0 = std::atan2(1.0, beta);  // circle angle of (1,1) about 1-beta
  for (std::size_t i = 1; i <= circ_n; ++i) {
    const double phi = a0 + (2.0 * kPi - 2.0 * a0) * static_cast<double>(i) / (circ_n + 1);
    pts.push_back({shape.disk_center_x() + shape.disk_radius() * std::cos(phi),
                   shape.disk_radius() * std::sin(phi)});
  }
  for (std::size_t i = arc_n; i >= 1; --i) {  // lower arc, (1,-1) back to the tip
    const double x = std::pow(static_cast<double>(i) / arc_n, 2.0);
    pts.push_back({x, -std::pow(x, beta)});
  }
  return RectifiableCurve::from_vertices(std::move(pts));
}

}  // namespace cuspflat
