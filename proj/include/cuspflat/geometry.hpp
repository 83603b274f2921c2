#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "cuspflat/numerics.hpp"

namespace cuspflat {

enum class CuspOrientation { inward, outward };

// Power-cusp disk: for beta >= 1 the inward variant is the ball
// B(1-beta, sqrt(beta^2+1)) minus the closed wedge {x >= 0, |y| <= x^beta};
// the outward variant is the open wedge {0 < x < 1, |y| < x^beta} union
// B(1+beta, sqrt(beta^2+1)). beta = 1 is the Lipschitz model domain.
struct CuspShape {
  double beta = 2.0;
  CuspOrientation orientation = CuspOrientation::inward;

  CuspShape() = default;
  CuspShape(double beta_, CuspOrientation o = CuspOrientation::inward)
      : beta(beta_), orientation(o) {
    if (!(beta >= 1.0)) throw std::invalid_argument("CuspShape: beta must be >= 1");
  }

  double disk_radius() const { return std::sqrt(beta * beta + 1.0); }
  double disk_center_x() const {
    return orientation == CuspOrientation::inward ? 1.0 - beta : 1.0 + beta;
  }
};

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  PlanePoint() = default;
  PlanePoint(double x_, double y_) : x(x_), y(y_) {}
  explicit PlanePoint(std::complex<double> z) : x(z.real()), y(z.imag()) {}

  std::complex<double> to_complex() const { return {x, y}; }
  double norm() const { return std::hypot(x, y); }

  friend PlanePoint operator-(PlanePoint a, PlanePoint b) { return {a.x - b.x, a.y - b.y}; }
  friend PlanePoint operator+(PlanePoint a, PlanePoint b) { return {a.x + b.x, a.y + b.y}; }
};

inline double distance(PlanePoint a, PlanePoint b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Angle normalized to [0, 2*pi); the cusp axis sits at theta = 0.
inline double canonical_angle(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t == 2.0 * kPi) t = 0.0;
  return t;
}

struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;  // in [0, 2*pi)

  PolarPoint() = default;
  PolarPoint(double r_, double theta_) : r(r_), theta(canonical_angle(theta_)) {
    if (!std::isfinite(r)) throw std::invalid_argument("PolarPoint: radius must be finite");
  }

  PlanePoint to_plane() const { return {r * std::cos(theta), r * std::sin(theta)}; }
};

inline PolarPoint to_polar(PlanePoint p) {
  return PolarPoint(std::hypot(p.x, p.y), std::atan2(p.y, p.x));
}

// Unique positive root of t^2 + t^(2*beta) = r^2. Safeguarded Newton on
// [0, r] with bisection fallback; the residual tolerance is relative.
inline double solve_t(double r, double beta) {
  if (!(r > 0.0)) throw std::domain_error("solve_t: radius must be positive");
  if (!(beta >= 1.0)) throw std::domain_error("solve_t: beta must be >= 1");
  if (beta == 1.0) return r / std::sqrt(2.0);

  const double r2 = r * r;
  const double tol = 1e-15 * r2;  // relative; stronger than 1e-14 max(1, r^2)
  auto residual = [&](double t) { return t * t + std::pow(t, 2.0 * beta) - r2; };

  double lo = 0.0, hi = r;  // f(0) = -r^2 < 0, f(r) = r^(2*beta) > 0
  double t = std::min(r, r / std::sqrt(2.0) * (1.0 + r));
  for (int iter = 0; iter < 200; ++iter) {
    const double f = residual(t);
    if (std::abs(f) <= tol) return t;
    if (f > 0.0) hi = t; else lo = t;
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
    const double df = 2.0 * t + 2.0 * beta * std::pow(t, 2.0 * beta - 1.0);
    double next = t - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t) break;
    t = next;
  }
  return 0.5 * (lo + hi);
}

// Sector decomposition of the unit disk at radius r: the circle S(0,r) meets
// the cusp wedge in |theta| < a with a = arctan(t^(beta-1)), t = solve_t(r).
struct SectorBounds {
  double r = 0.0;
  double t = 0.0;
  double a = 0.0;  // half-angle of the complement sector

  double interior_lo() const { return a; }
  double interior_hi() const { return 2.0 * kPi - a; }
};

inline SectorBounds sector_bounds(double r, const CuspShape& shape) {
  if (!(r > 0.0 && r < 1.0)) throw std::domain_error("sector_bounds: need 0 < r < 1");
  SectorBounds b;
  b.r = r;
  b.t = solve_t(r, shape.beta);
  b.a = std::atan(std::pow(b.t, shape.beta - 1.0));
  return b;
}

// d/dr of the implicit abscissa and of the half-angle a(r).
inline double solve_t_derivative(double r, double beta, double t) {
  return r / (t + beta * std::pow(t, 2.0 * beta - 1.0));
}

inline double half_angle_derivative(double beta, double t, double dt_dr) {
  if (beta == 1.0) return 0.0;  // a is identically pi/4
  const double tb2 = std::pow(t, beta - 2.0);
  const double tb1 = std::pow(t, beta - 1.0);
  return (beta - 1.0) * tb2 / (1.0 + tb1 * tb1) * dt_dr;
}

// Open-set membership; boundary points report false.
inline bool contains(const CuspShape& shape, PlanePoint p) {
  const double cx = shape.disk_center_x();
  const double rb = shape.disk_radius();
  const bool in_ball = std::hypot(p.x - cx, p.y) < rb;
  if (shape.orientation == CuspOrientation::inward) {
    const bool in_closed_wedge = p.x >= 0.0 && std::abs(p.y) <= std::pow(p.x, shape.beta);
    return in_ball && !in_closed_wedge;
  }
  const bool in_open_wedge =
      p.x > 0.0 && p.x < 1.0 && std::abs(p.y) < std::pow(p.x, shape.beta);
  return in_open_wedge || in_ball;
}

// The pair of cusp boundary points (x, +-x^beta).
inline std::pair<PlanePoint, PlanePoint> cusp_boundary(const CuspShape& shape, double x) {
  if (!(x > 0.0 && x <= 1.0)) throw std::domain_error("cusp_boundary: need 0 < x <= 1");
  const double yb = std::pow(x, shape.beta);
  return {PlanePoint{x, yb}, PlanePoint{x, -yb}};
}

// Area of the wedge piece U_t = {0 < x < t, |y| < x^beta}.
inline double cusp_wedge_area(double t, double beta) {
  if (!(t > 0.0)) throw std::domain_error("cusp_wedge_area: need t > 0");
  return 2.0 * std::pow(t, beta + 1.0) / (beta + 1.0);
}

}  // namespace cuspflat
