#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cuspflat/geometry.hpp"
#include "cuspflat/mapping.hpp"
#include "cuspflat/numerics.hpp"

namespace cuspflat {

// Inversion in the unit circle, z -> z / |z|^2. Anticonformal involution.
inline PlanePoint circle_inversion(PlanePoint z) {
  const double rho2 = z.x * z.x + z.y * z.y;
  if (rho2 == 0.0) throw std::domain_error("circle_inversion: origin maps to infinity");
  return {z.x / rho2, z.y / rho2};
}

inline Mat2 circle_inversion_jet(PlanePoint z) {
  const double rho2 = z.x * z.x + z.y * z.y;
  if (rho2 == 0.0) throw std::domain_error("circle_inversion_jet: origin");
  const double nx = z.x * z.x / rho2, ny = z.y * z.y / rho2, nxy = z.x * z.y / rho2;
  return {(1.0 - 2.0 * nx) / rho2, -2.0 * nxy / rho2, -2.0 * nxy / rho2,
          (1.0 - 2.0 * ny) / rho2};
}

struct Box {
  double x0, x1, y0, y1;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains_origin() const { return x0 <= 0.0 && x1 >= 0.0 && y0 <= 0.0 && y1 >= 0.0; }
};

struct ReflectionInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct CurveLengthCheck {
  double length = 0.0;
  double lower_bound = 0.0;
  bool holds = false;
};

struct IsoperimetricCheck {
  double area = 0.0;
  double boundary_length = 0.0;
  bool holds = false;
};

// Boundary reflections induced by a cusp map f with analytic inverse h.
//
// Two conjugations are exposed. reflect() swaps the cusp domain with the
// wedge complement inside the unit disk and fixes the cusp boundary
// pointwise: it is h . s . f where s is the angular involution of the image
// plane that exchanges the quarter-wedge with its sector and fixes the rays
// theta = +-pi/4. The radial parts of h and f cancel exactly, so the
// composition is evaluated with r carried through unchanged.
//
// reflect_disk() is the circle-inversion conjugation h . Psi . f. It swaps
// the unit disk with its exterior, fixes |z| = 1, and is the map whose
// weighted-gradient integral the reflection inequality bounds by the two
// distortion integrals of f.
class ReflectionMap {
 public:
  explicit ReflectionMap(const CuspMap& base) : base_(base) {}

  const CuspMap& base() const { return base_; }

  // Reflection in the cusp boundary, valid inside the unit disk.
  PlanePoint reflect(PlanePoint z) const {
    const PolarPoint pt = to_polar(z);
    if (pt.r == 0.0) throw std::domain_error("reflect: cusp tip is singular");
    if (pt.r >= 1.0) throw std::domain_error("reflect: outside the region of validity");
    const SectorBounds b = base_.bounds(pt.r);
    const double tt = base_.angular_with_bounds(pt.theta, b);
    const double swapped = sector_swap(tt);
    const double theta = base_.angular_inverse_with_bounds(canonical_angle(swapped), b);
    return PolarPoint(pt.r, theta).to_plane();
  }

  // Reflection in the unit circle through the map: h . Psi . f.
  PlanePoint reflect_disk(PlanePoint z) const {
    const PlanePoint w = circle_inversion(base_.forward(z));
    return base_.inverse(w);
  }

  // Chain-rule differential of reflect_disk.
  Mat2 reflect_disk_jet(PlanePoint z) const {
    const PlanePoint fz = base_.forward(z);
    const Mat2 d_f = base_.differential(z);
    const Mat2 d_psi = circle_inversion_jet(fz);
    const PlanePoint w = circle_inversion(fz);
    if (to_polar(w).r >= 1.0) return d_psi * d_f;
    const PlanePoint v = base_.inverse(w);
    const Mat2 d_h = base_.differential(v).inverse();
    return d_h * (d_psi * d_f);
  }

  double distortion_at(PlanePoint z) const {
    const PolarPoint pt = to_polar(z);
    if (pt.r >= 1.0) return 1.0;
    return base_.distortion(pt);
  }

  // Both sides of the weighted-gradient inequality
  //   int_U |Dg|^p / |J_g|^{(p-1)/2}
  //     <= ( int_{g(U)} K_f^p )^{1/2} ( int_U K_f^p )^{1/2}
  // for g = reflect_disk on a box avoiding h(0) = 0; the g(U) integral is
  // pulled back through the area formula.
  ReflectionInequality verify_reflection_inequality(const Box& u, double p,
                                                    double tol = 1e-6) const {
    if (!(p > 1.0)) throw std::domain_error("verify_reflection_inequality: need p > 1");
    if (u.contains_origin())
      throw std::domain_error("verify_reflection_inequality: box must avoid h(0) = 0");

    auto lhs_fn = [&](double x, double y) {
      const Mat2 dg = reflect_disk_jet({x, y});
      const double norm = op_norm(dg);
      const double jac = std::abs(dg.det());
      return std::pow(norm, p) / std::pow(jac, 0.5 * (p - 1.0));
    };
    auto image_fn = [&](double x, double y) {
      const Mat2 dg = reflect_disk_jet({x, y});
      const double k = distortion_at(reflect_disk({x, y}));
      return std::pow(k, p) * std::abs(dg.det());
    };
    auto source_fn = [&](double x, double y) { return std::pow(distortion_at({x, y}), p); };

    const double rel = 1e-8;
    ReflectionInequality out;
    out.lhs = integrate_box(lhs_fn, u.x0, u.x1, u.y0, u.y1, rel);
    const double over_image = integrate_box(image_fn, u.x0, u.x1, u.y0, u.y1, rel);
    const double over_source = integrate_box(source_fn, u.x0, u.x1, u.y0, u.y1, rel);
    out.rhs = std::sqrt(over_image * over_source);
    out.holds = out.lhs <= out.rhs * (1.0 + tol);
    return out;
  }

  // Arclength of the reflected vertical segment I_t = {t + iy : |y| < t^beta}.
  // The image connects the two cusp boundary points through the far side of
  // the cusp, so its length is at least 2t.
  CurveLengthCheck curve_length_check(double t, double tol = 1e-3) const {
    CurveLengthCheck out;
    out.lower_bound = 2.0 * t;
    out.length = integrate_1d([&](double y) { return segment_speed(t, y); },
                              -std::pow(t, base_.beta()), std::pow(t, base_.beta()), 1e-9);
    out.holds = out.length >= out.lower_bound * (1.0 - tol);
    return out;
  }

  // Isoperimetric control of the reflected wedge piece g(U_t): its area never
  // exceeds (perimeter)^2 / (4 pi).
  IsoperimetricCheck isoperimetric_check(double t, double tol = 1e-3) const {
    IsoperimetricCheck out;
    const double arc = cusp_arc_length(t);
    out.boundary_length = curve_length_check(t).length + 2.0 * arc;
    out.area = reflected_wedge_area(t);
    out.holds =
        out.area <= out.boundary_length * out.boundary_length / (4.0 * kPi) * (1.0 + tol);
    return out;
  }

  // Length of one cusp arc {(x, x^beta) : 0 <= x <= t}.
  double cusp_arc_length(double t) const {
    const double beta = base_.beta();
    return integrate_1d(
        [&](double x) { return std::sqrt(1.0 + beta * beta * std::pow(x, 2.0 * beta - 2.0)); },
        0.0, t, 1e-10);
  }

  // Area of g(U_t) by Green's theorem along its boundary: the reflected
  // segment plus the two cusp arcs (which g fixes pointwise).
  double reflected_wedge_area(double t) const {
    const double beta = base_.beta();
    double area = 0.0;
    std::size_t n = 2048;
    double prev = 0.0;
    for (int pass = 0; pass < 6; ++pass) {
      std::vector<PlanePoint> poly;
      poly.reserve(2 * n + 2);
      // upper cusp arc from origin to (t, t^beta)
      for (std::size_t i = 0; i <= n; ++i) {
        const double x = t * static_cast<double>(i) / static_cast<double>(n);
        poly.push_back({x, std::pow(x, beta)});
      }
      // reflected segment from (t, t^beta) to (t, -t^beta)
      for (std::size_t i = 1; i <= n; ++i) {
        const double y = std::pow(t, beta) * (1.0 - 2.0 * static_cast<double>(i) / n);
        poly.push_back(reflect({t, y}));
      }
      // lower cusp arc back to the origin
      for (std::size_t i = 1; i < n; ++i) {
        const double x = t * (1.0 - static_cast<double>(i) / n);
        poly.push_back({x, -std::pow(x, beta)});
      }
      double twice = 0.0;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const PlanePoint& a = poly[i];
        const PlanePoint& b = poly[(i + 1) % poly.size()];
        twice += a.x * b.y - b.x * a.y;
      }
      area = 0.5 * std::abs(twice);
      if (pass > 0 && std::abs(area - prev) <= 1e-6 * std::max(1.0, area)) break;
      prev = area;
      n *= 2;
    }
    return area;
  }

 private:
  // Angular involution of the image plane fixing theta = +-pi/4 and swapping
  // the wedge |theta| < pi/4 with the sector pi/4 < theta < 7pi/4.
  static double sector_swap(double theta_tilde) {
    if (theta_tilde >= kPi / 4.0 && theta_tilde <= 7.0 * kPi / 4.0)
      return (kPi - theta_tilde) / 3.0;
    const double signed_theta =
        theta_tilde < kPi / 4.0 ? theta_tilde : theta_tilde - 2.0 * kPi;
    return kPi - 3.0 * signed_theta;
  }

  // |d/dy of reflect(t + iy)| from the closed-form polar derivatives.
  double segment_speed(double t, double y) const {
    const double r = std::hypot(t, y);
    const double theta = std::atan2(y, t);  // signed, inside (-a, a)
    const SectorBounds b = base_.bounds(r);
    const double dt_dr = solve_t_derivative(r, base_.beta(), b.t);
    const double da_dr = half_angle_derivative(base_.beta(), b.t, dt_dr);
    const double dr_dy = y / r;
    const double dth_dy = t / (r * r);
    // theta' = pi - theta (pi - a)/a
    const double dthp_dth = -(kPi - b.a) / b.a;
    const double dthp_da = theta * kPi / (b.a * b.a);
    const double dthp_dy = dthp_dth * dth_dy + dthp_da * da_dr * dr_dy;
    return std::hypot(dr_dy, r * dthp_dy);
  }

  CuspMap base_;
};

}  // namespace cuspflat
