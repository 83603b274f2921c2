#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "cuspflat/geometry.hpp"
#include "cuspflat/numerics.hpp"

namespace cuspflat {

// Exponent pair (q on the cusp domain, p on its complement). Either entry may
// be infinite; q >= 1 and p > 1 otherwise.
struct ExponentPair {
  double q = 2.0;
  double p = 2.0;

  ExponentPair() = default;
  ExponentPair(double q_, double p_) : q(q_), p(p_) {
    if (std::isnan(q) || std::isnan(p)) throw std::invalid_argument("ExponentPair: nan");
    if (!(q >= 1.0)) throw std::invalid_argument("ExponentPair: q must be >= 1 or inf");
    if (!(p > 1.0)) throw std::invalid_argument("ExponentPair: p must be > 1 or inf");
  }

  bool q_finite() const { return std::isfinite(q); }
  bool p_finite() const { return std::isfinite(p); }
};

// Thrown when beta >= beta_cr(p, q): the admissible gamma window is empty.
class infeasible_error : public std::domain_error {
 public:
  infeasible_error(double beta, double beta_cr, std::string branch)
      : std::domain_error(format(beta, beta_cr, branch)),
        beta_(beta),
        beta_cr_(beta_cr),
        branch_(std::move(branch)) {}

  double beta() const { return beta_; }
  double beta_cr() const { return beta_cr_; }
  const std::string& branch() const { return branch_; }

 private:
  static std::string format(double beta, double beta_cr, const std::string& branch) {
    std::ostringstream os;
    os << "infeasible configuration: beta = " << beta << " >= beta_cr = " << beta_cr
       << " (critical-power branch " << branch << ")";
    return os.str();
  }
  double beta_;
  double beta_cr_;
  std::string branch_;
};

namespace detail {

inline double beta_critical_double(double p, double q) {
  const bool pf = std::isfinite(p), qf = std::isfinite(q);
  if (!pf && !qf) return 1.0;
  if (!pf) return 2.0 / q + 1.0;
  if (!qf) return (p + 1.0) / (p - 1.0);
  return (p * q + 2.0 * p + q) / (p * q - q);
}

inline const char* beta_critical_branch(double p, double q) {
  const bool pf = std::isfinite(p), qf = std::isfinite(q);
  if (!pf && !qf) return "limit p,q->inf";
  if (!pf) return "2/q + 1";
  if (!qf) return "(p+1)/(p-1)";
  return "(pq+2p+q)/(pq-q)";
}

}  // namespace detail

// Open admissible window for gamma when both exponents are finite; the
// degenerate single-point choices for an infinite exponent are returned as
// a collapsed interval.
inline std::pair<double, double> gamma_window(double beta, const ExponentPair& exps) {
  if (!exps.p_finite()) return {beta - 1.0, beta - 1.0};
  if (!exps.q_finite()) return {0.0, 0.0};
  const double lower = std::max((beta * (exps.p - 1.0) - (exps.p + 1.0)) / exps.p, 0.0);
  return {lower, 2.0 / exps.q};
}

// The selection rule for gamma, evaluated without the feasibility test:
// beta-1 when p = inf, 0 when q = inf, otherwise the midpoint of the window.
inline double gamma_rule_value(double beta, const ExponentPair& exps) {
  if (!exps.p_finite()) return beta - 1.0;
  if (!exps.q_finite()) return 0.0;
  const auto [lo, hi] = gamma_window(beta, exps);
  return 0.5 * (lo + hi);
}

inline bool gamma_window_nonempty(double beta, const ExponentPair& exps) {
  if (!exps.p_finite() && !exps.q_finite()) return false;
  if (!exps.p_finite()) return beta - 1.0 < 2.0 / exps.q;
  if (!exps.q_finite()) return beta < (exps.p + 1.0) / (exps.p - 1.0);
  const auto [lo, hi] = gamma_window(beta, exps);
  return lo < hi;
}

// Jet of the cusp map at a point: image in polar form, the entries of the
// lower-triangular polar differential, and the derived scalars.
struct MapJet {
  PolarPoint image;
  double d_rt_dr = 1.0;          // d(rt)/dr
  double d_th_dr_scaled = 0.0;   // rt * d(tt)/dr
  double d_th_dth_scaled = 1.0;  // (rt / r) * d(tt)/dtheta
  double jacobian = 1.0;
  double op_norm = 1.0;
  double distortion = 1.0;
};

// The cusp-flattening self-map of the unit disk. Radially it is
// rt(r) = e * exp(-r^-gamma) (identity when q = inf); in angle it maps the
// r-dependent wedge/sector split onto the fixed quarter-wedge split of the
// Lipschitz model domain, affinely on each side. Outside the closed disk the
// map is the identity. Immutable after construction; evaluations are pure.
class CuspMap {
 public:
  enum class RadialKind { exponential, identity };

  static CuspMap forced(const CuspShape& shape, double gamma, RadialKind kind,
                        const ExponentPair& exps = ExponentPair(2.0, 2.0)) {
    return CuspMap(shape, gamma, kind, exps);
  }

  static CuspMap identity_map() {
    return CuspMap(CuspShape(1.0), 0.0, RadialKind::identity,
                   ExponentPair(std::numeric_limits<double>::infinity(),
                                std::numeric_limits<double>::infinity()));
  }

  const CuspShape& shape() const { return shape_; }
  double beta() const { return shape_.beta; }
  double gamma() const { return gamma_; }
  RadialKind radial_kind() const { return kind_; }
  const ExponentPair& exponents() const { return exps_; }

  SectorBounds bounds(double r) const { return sector_bounds(r, shape_); }

  // rt(r); strictly increasing with rt(1) = 1.
  double radial(double r) const {
    if (!(r > 0.0)) throw std::domain_error("radial: need r > 0");
    if (kind_ == RadialKind::identity) return r;
    return std::exp(1.0 - std::pow(r, -gamma_));
  }

  double radial_derivative(double r) const {
    if (kind_ == RadialKind::identity) return 1.0;
    return gamma_ * std::pow(r, -(gamma_ + 1.0)) * radial(r);
  }

  double radial_inverse(double rho) const {
    if (!(rho > 0.0 && rho <= 1.0)) throw std::domain_error("radial_inverse: need 0 < rho <= 1");
    if (kind_ == RadialKind::identity) return rho;
    return std::pow(1.0 - std::log(rho), -1.0 / gamma_);
  }

  // Image angle; theta exactly on a seam takes the interior branch.
  double angular(const PolarPoint& pt) const {
    if (!(pt.r > 0.0 && pt.r < 1.0)) throw std::domain_error("angular: need 0 < r < 1");
    return angular_with_bounds(pt.theta, bounds(pt.r));
  }

  double angular_with_bounds(double theta, const SectorBounds& b) const {
    const double a = b.a;
    if (theta >= a && theta <= 2.0 * kPi - a) {
      return 3.0 * kPi * theta / (4.0 * (kPi - a)) +
             (kPi / 4.0 - 3.0 * kPi * a / (4.0 * (kPi - a)));
    }
    if (theta < a) return kPi * theta / (4.0 * a);
    return 2.0 * kPi - kPi * (2.0 * kPi - theta) / (4.0 * a);
  }

  // Inverse of the angular map at the same radius parameters.
  double angular_inverse_with_bounds(double theta_tilde, const SectorBounds& b) const {
    const double a = b.a;
    if (theta_tilde >= kPi / 4.0 && theta_tilde <= 7.0 * kPi / 4.0) {
      return (theta_tilde - kPi / 4.0) * (4.0 * (kPi - a)) / (3.0 * kPi) + a;
    }
    if (theta_tilde < kPi / 4.0) return 4.0 * a * theta_tilde / kPi;
    return 2.0 * kPi - 4.0 * a * (2.0 * kPi - theta_tilde) / kPi;
  }

  PlanePoint forward(PlanePoint z) const {
    const PolarPoint pt = to_polar(z);
    if (pt.r >= 1.0) return z;
    if (pt.r == 0.0) return {0.0, 0.0};
    const SectorBounds b = bounds(pt.r);
    const double rt = radial(pt.r);
    const double tt = angular_with_bounds(pt.theta, b);
    return PolarPoint(rt, tt).to_plane();
  }

  PlanePoint inverse(PlanePoint w) const {
    const PolarPoint pt = to_polar(w);
    if (pt.r >= 1.0) return w;
    if (pt.r == 0.0) return {0.0, 0.0};
    const double r = radial_inverse(pt.r);
    const SectorBounds b = bounds(r);
    const double theta = angular_inverse_with_bounds(pt.theta, b);
    return PolarPoint(r, theta).to_plane();
  }

  // Per-radius data shared by every angular evaluation at that radius; the
  // quadrature kernel prepares one of these per radial node.
  struct PreparedRadius {
    double r = 0.0;
    SectorBounds b;
    double dt_dr = 0.0;
    double da_dr = 0.0;
    double rt = 0.0;
    double m11 = 0.0;  // (d(rt)/dr) / rt, finite even where rt underflows
  };

  PreparedRadius prepare_radius(double r) const {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("prepare_radius: need 0 < r < 1");
    PreparedRadius pr;
    pr.r = r;
    pr.b = bounds(r);
    pr.dt_dr = solve_t_derivative(r, shape_.beta, pr.b.t);
    pr.da_dr = half_angle_derivative(shape_.beta, pr.b.t, pr.dt_dr);
    pr.rt = radial(r);
    pr.m11 = kind_ == RadialKind::identity ? 1.0 / r : gamma_ * std::pow(r, -(gamma_ + 1.0));
    return pr;
  }

  // K from the rt-normalized differential; stays in range even where rt(r)
  // itself underflows (deep-annulus probe maps with large gamma).
  double distortion_prepared(double theta, const PreparedRadius& pr) const {
    const auto [tt, tt_theta, tt_a] = angular_jet(canonical_angle(theta), pr.b);
    (void)tt;
    return distortion_of_matrix(pr.m11, 0.0, tt_a * pr.da_dr, tt_theta / pr.r);
  }

  MapJet jet(const PolarPoint& pt) const {
    if (pt.r == 0.0) throw std::domain_error("jet: singular point r = 0");
    if (pt.r >= 1.0) {
      MapJet j;
      j.image = pt;
      return j;
    }
    const PreparedRadius pr = prepare_radius(pt.r);
    const auto [tt, tt_theta, tt_a] = angular_jet(pt.theta, pr.b);

    MapJet j;
    j.image = PolarPoint(pr.rt, tt);
    j.d_rt_dr = radial_derivative(pt.r);
    j.d_th_dr_scaled = pr.rt * tt_a * pr.da_dr;
    j.d_th_dth_scaled = pr.rt / pt.r * tt_theta;
    j.jacobian = j.d_rt_dr * j.d_th_dth_scaled;
    j.op_norm =
        singular_values_2x2(j.d_rt_dr, 0.0, j.d_th_dr_scaled, j.d_th_dth_scaled).s_max;
    j.distortion = distortion_prepared(pt.theta, pr);
    return j;
  }

  double distortion(const PolarPoint& pt) const {
    if (pt.r == 0.0) throw std::domain_error("distortion: singular point r = 0");
    if (pt.r >= 1.0) return 1.0;
    return distortion_prepared(pt.theta, prepare_radius(pt.r));
  }

  // Cartesian differential: R(image angle) * M * R(-theta), identity outside
  // the open disk.
  Mat2 differential(PlanePoint z) const {
    const PolarPoint pt = to_polar(z);
    if (pt.r >= 1.0) return Mat2::id();
    const MapJet j = jet(pt);
    const Mat2 m{j.d_rt_dr, 0.0, j.d_th_dr_scaled, j.d_th_dth_scaled};
    return Mat2::rotation(j.image.theta) * m * Mat2::rotation(-pt.theta);
  }

  std::complex<double> beltrami(const PolarPoint& pt) const {
    const Mat2 a = differential(pt.to_plane());
    const std::complex<double> fz(0.5 * (a.a11 + a.a22), 0.5 * (a.a21 - a.a12));
    const std::complex<double> fzbar(0.5 * (a.a11 - a.a22), 0.5 * (a.a21 + a.a12));
    return fzbar / fz;
  }

 private:
  CuspMap(const CuspShape& shape, double gamma, RadialKind kind, const ExponentPair& exps)
      : shape_(shape), gamma_(gamma), kind_(kind), exps_(exps) {
    if (shape_.orientation != CuspOrientation::inward)
      throw std::invalid_argument("CuspMap: construction targets inward cusps");
    if (kind_ == RadialKind::exponential && !(gamma_ > 0.0))
      throw std::invalid_argument("CuspMap: exponential radial branch needs gamma > 0");
    if (!(gamma_ >= 0.0)) throw std::invalid_argument("CuspMap: gamma must be >= 0");
  }

  // Returns (theta_tilde, d/dtheta, d/da) for the branch owning theta.
  struct AngularJet {
    double value, d_theta, d_a;
  };
  AngularJet angular_jet(double theta, const SectorBounds& b) const {
    const double a = b.a;
    if (theta >= a && theta <= 2.0 * kPi - a) {
      const double denom = 4.0 * (kPi - a);
      return {3.0 * kPi * theta / denom + (kPi / 4.0 - 3.0 * kPi * a / denom),
              3.0 * kPi / denom,
              3.0 * kPi * (theta - kPi) / (denom * (kPi - a))};
    }
    if (theta < a) {
      return {kPi * theta / (4.0 * a), kPi / (4.0 * a), -kPi * theta / (4.0 * a * a)};
    }
    return {2.0 * kPi - kPi * (2.0 * kPi - theta) / (4.0 * a), kPi / (4.0 * a),
            kPi * (2.0 * kPi - theta) / (4.0 * a * a)};
  }

  CuspShape shape_;
  double gamma_;
  RadialKind kind_;
  ExponentPair exps_;

  friend CuspMap make_map(double beta, const ExponentPair& exps);
};

// Feasibility-checked construction: requires beta < beta_cr(p, q) and picks
// gamma by the selection rule.
inline CuspMap make_map(double beta, const ExponentPair& exps) {
  if (!(beta > 1.0)) throw std::invalid_argument("make_map: beta must be > 1");
  if (!gamma_window_nonempty(beta, exps)) {
    throw infeasible_error(beta, detail::beta_critical_double(exps.p, exps.q),
                           detail::beta_critical_branch(exps.p, exps.q));
  }
  const double gamma = gamma_rule_value(beta, exps);
  const CuspMap::RadialKind kind =
      exps.q_finite() ? CuspMap::RadialKind::exponential : CuspMap::RadialKind::identity;
  return CuspMap(CuspShape(beta), gamma, kind, exps);
}

}  // namespace cuspflat
