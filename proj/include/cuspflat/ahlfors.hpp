#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cuspflat/boundary.hpp"
#include "cuspflat/geometry.hpp"

namespace cuspflat {

namespace detail {

inline double cross(PlanePoint o, PlanePoint a, PlanePoint b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Monotone-chain convex hull, counterclockwise without the closing point.
inline std::vector<PlanePoint> convex_hull(std::vector<PlanePoint> pts) {
  std::sort(pts.begin(), pts.end(), [](PlanePoint a, PlanePoint b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](PlanePoint a, PlanePoint b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<PlanePoint> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace detail

// Exact diameter of a finite point set via rotating calipers on its hull.
inline double polygon_diameter(const std::vector<PlanePoint>& pts) {
  if (pts.size() < 2) return 0.0;
  const std::vector<PlanePoint> hull = detail::convex_hull(pts);
  const std::size_t m = hull.size();
  if (m == 1) return 0.0;
  if (m == 2) return distance(hull[0], hull[1]);
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const PlanePoint a = hull[i];
    const PlanePoint b = hull[(i + 1) % m];
    const PlanePoint edge{b.x - a.x, b.y - a.y};
    // advance the antipodal point while it still gains area against edge i
    while (true) {
      const PlanePoint cur = hull[j];
      const PlanePoint nxt = hull[(j + 1) % m];
      const double gain = edge.x * (nxt.y - cur.y) - edge.y * (nxt.x - cur.x);
      if (gain > 0.0) j = (j + 1) % m; else break;
    }
    best = std::max({best, distance(a, hull[j]), distance(b, hull[j])});
  }
  return best;
}

// Three-point constant estimate: sup over sampled boundary pairs (a, b) of
// diam(Gamma) / |a-b|^alpha, Gamma being the smaller-diameter component of
// the boundary split at a and b.
struct AhlforsEstimate {
  double gamma = 0.0;
  double alpha = 1.0;
  std::pair<PlanePoint, PlanePoint> worst_pair;
  // Growth exponent of the tip ratio against t for the analytic cusp pairs;
  // NaN when no adversarial grid was used.
  double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
};

inline AhlforsEstimate ahlfors_gamma(const RectifiableCurve& curve, double alpha,
                                     std::size_t samples) {
  if (samples < 100) throw std::invalid_argument("ahlfors_gamma: need samples >= 100");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("ahlfors_gamma: alpha in (0, 1]");
  const double l = curve.total_length();
  const std::size_t n = curve.vertices.size();

  AhlforsEstimate est;
  est.alpha = alpha;
  std::vector<double> s(samples);
  for (std::size_t i = 0; i < samples; ++i)
    s[i] = l * static_cast<double>(i) / static_cast<double>(samples);

  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = i + 1; j < samples; ++j) {
      const PlanePoint a = curve.arclength_point(s[i]);
      const PlanePoint b = curve.arclength_point(s[j]);
      const double chord = distance(a, b);
      if (chord == 0.0) continue;
      std::vector<PlanePoint> comp1{a}, comp2{b};
      for (std::size_t k = 0; k < n; ++k) {
        const double c = curve.cumulative[k];
        if (c > s[i] && c < s[j]) comp1.push_back(curve.vertices[k]);
        if (c < s[i] || c > s[j]) comp2.push_back(curve.vertices[k]);
      }
      comp1.push_back(b);
      comp2.push_back(a);
      const double d = std::min(polygon_diameter(comp1), polygon_diameter(comp2));
      const double ratio = d / std::pow(chord, alpha);
      if (ratio > est.gamma) {
        est.gamma = ratio;
        est.worst_pair = {a, b};
      }
    }
  }
  return est;
}

// Analytic inward-cusp boundary: adversarial symmetric pairs (t, +-t^beta) on
// a log grid down to t = 1e-8, where the split component through the tip has
// diameter max(2 t^beta, sqrt(t^2 + t^(2 beta))) exactly, combined with
// uniform pairs on a polygonal trace of the full boundary.
inline AhlforsEstimate ahlfors_gamma(const CuspShape& shape, double alpha,
                                     std::size_t samples) {
  if (samples < 100) throw std::invalid_argument("ahlfors_gamma: need samples >= 100");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("ahlfors_gamma: alpha in (0, 1]");
  AhlforsEstimate est = ahlfors_gamma(make_cusp_polygon(shape.beta, 256), alpha, 100);
  est.alpha = alpha;

  const double t_min = 1e-8, t_max = 0.5;
  std::vector<double> log_t, log_ratio;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t =
        t_min * std::pow(t_max / t_min, static_cast<double>(i) / (samples - 1));
    const double tb = std::pow(t, shape.beta);
    const double chord = 2.0 * tb;
    const double diam = std::max(chord, std::hypot(t, tb));
    const double ratio = diam / std::pow(chord, alpha);
    if (ratio > est.gamma) {
      est.gamma = ratio;
      est.worst_pair = {{t, tb}, {t, -tb}};
    }
    if (t <= 1e-3) {
      log_t.push_back(std::log(t));
      log_ratio.push_back(std::log(ratio));
    }
  }
  est.fitted_exponent = fit_slope(log_t, log_ratio);
  return est;
}

// The regularity exponent at which a beta-cusp boundary becomes Ahlfors
// regular.
inline double cusp_alpha(double beta) {
  if (!(beta >= 1.0)) throw std::domain_error("cusp_alpha: need beta >= 1");
  return 1.0 / beta;
}

}  // namespace cuspflat
