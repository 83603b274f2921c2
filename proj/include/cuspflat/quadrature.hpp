#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cuspflat/mapping.hpp"
#include "cuspflat/numerics.hpp"

namespace cuspflat {

enum class Region { cusp_interior, complement_in_disk };

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t cells = 0;
  bool converged = false;
};

// Log-slope threshold separating a geometric (integrable) annulus tail from a
// divergent one.
inline double divergence_delta() { return 0.1 * std::log(2.0); }

// Per-dyadic-annulus partial integrals I_k over r in [2^-(k+1), 2^-k] and the
// fitted decay slope d(log I_k)/dk over the last 8 annuli. For an infinite
// exponent the partials hold per-annulus sups of the integrand instead.
struct AnnulusProfile {
  std::vector<double> radii;     // outer radius 2^-k of annulus k
  std::vector<double> partials;  // I_k (or sup_k when the exponent is infinite)
  double slope = 0.0;
  double exponent = 1.0;
  bool finite_exponent = true;

  // Geometric decay verdict: integrals must decay below -delta; a sup profile
  // only needs to stay bounded (slope below +delta).
  bool convergent() const {
    return finite_exponent ? slope < -divergence_delta() : slope < divergence_delta();
  }
};

struct StripOptions {
  double rel_tol = 1e-8;
  int max_depth = 12;
};

namespace detail {

// Adaptive tensor quadrature over one radial strip [r_lo, r_hi]. The strip is
// mapped to (v, u) in [0,1]^2 with r log-uniform in v and theta affine in u
// between the r-dependent sector bounds, so the seam curves theta = +-a(r)
// are always cell edges. Each cell is Gauss-Legendre 5x5, compared against
// its 2x2 subdivision for the error estimate. Leaf contributions are
// accumulated in a fixed traversal order and pairwise-summed, which makes the
// result reproducible.
//
// Integrand requirements:
//   State prepare(double r) const;
//   std::pair<double,double> theta_range(const State&) const;
//   double eval(double r, double theta, const State&) const;
template <class Integrand>
class StripIntegrator {
 public:
  StripIntegrator(const Integrand& f, double r_lo, double r_hi, StripOptions opt)
      : f_(f), r_lo_(r_lo), log_ratio_(std::log(r_hi / r_lo)), opt_(opt) {
    if (!(r_hi > r_lo && r_lo > 0.0))
      throw std::domain_error("integrate_strip: need 0 < r_lo < r_hi");
    if (!(opt.rel_tol > 0.0)) throw std::domain_error("integrate_strip: tolerance <= 0");
  }

  QuadratureResult run() {
    double tol_abs = std::abs(cell_value(0.0, 1.0, 0.0, 1.0)) * opt_.rel_tol;
    if (tol_abs == 0.0) tol_abs = opt_.rel_tol;
    QuadratureResult res;
    for (int pass = 0; pass < 3; ++pass) {
      res = run_with_budget(tol_abs);
      const double want = std::abs(res.value) * opt_.rel_tol;
      if (want <= 0.0 || tol_abs <= 2.0 * want) break;
      tol_abs = want;
    }
    return res;
  }

 private:
  struct Cell {
    double v0, v1, u0, u1;
    double fine;  // 2x2 subdivision value
    double diff;  // |fine - coarse|, the Richardson error estimate
    int depth;
    std::size_t seq;
  };

  double cell_value(double v0, double v1, double u0, double u1) const {
    const double vm = 0.5 * (v0 + v1), vh = 0.5 * (v1 - v0);
    const double um = 0.5 * (u0 + u1), uh = 0.5 * (u1 - u0);
    double total = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double v = vm + vh * kGL5Nodes[i];
      const double r = r_lo_ * std::exp(log_ratio_ * v);
      const auto state = f_.prepare(r);
      const auto [lo, hi] = f_.theta_range(state);
      const double width = hi - lo;
      double row = 0.0;
      for (int j = 0; j < 5; ++j) {
        const double u = um + uh * kGL5Nodes[j];
        row += kGL5Weights[j] * f_.eval(r, lo + u * width, state);
      }
      total += kGL5Weights[i] * row * r * r * width;
    }
    return total * log_ratio_ * vh * uh;
  }

  Cell make_cell(double v0, double v1, double u0, double u1, double coarse, int depth,
                 std::size_t seq) const {
    const double vm = 0.5 * (v0 + v1), um = 0.5 * (u0 + u1);
    const double fine = (cell_value(v0, vm, u0, um) + cell_value(v0, vm, um, u1)) +
                        (cell_value(vm, v1, u0, um) + cell_value(vm, v1, um, u1));
    return {v0, v1, u0, u1, fine, std::abs(fine - coarse), depth, seq};
  }

  // Greedy global refinement: always split the cell with the largest
  // Richardson estimate until the summed estimate meets the budget. Local
  // area-proportional budgets would over-refine the conical points of the
  // distortion field, whose total error contribution is negligible.
  QuadratureResult run_with_budget(double tol_abs) {
    QuadratureResult res;
    std::size_t seq = 0;
    auto worse = [](const Cell& a, const Cell& b) {
      if (a.diff != b.diff) return a.diff < b.diff;
      return a.seq > b.seq;
    };
    std::vector<Cell> heap;
    heap.push_back(make_cell(0.0, 1.0, 0.0, 1.0, cell_value(0.0, 1.0, 0.0, 1.0), 0, seq++));
    std::vector<Cell> finished;
    double total_err = heap.front().diff;
    res.cells = 4;
    const std::size_t cell_cap = 100000;
    while (total_err > tol_abs && !heap.empty() && res.cells < cell_cap) {
      std::pop_heap(heap.begin(), heap.end(), worse);
      const Cell c = heap.back();
      heap.pop_back();
      if (c.depth >= opt_.max_depth) {
        finished.push_back(c);
        continue;
      }
      const double vm = 0.5 * (c.v0 + c.v1), um = 0.5 * (c.u0 + c.u1);
      total_err -= c.diff;
      const Cell parts[4] = {
          make_cell(c.v0, vm, c.u0, um, cell_value(c.v0, vm, c.u0, um), c.depth + 1, seq++),
          make_cell(c.v0, vm, um, c.u1, cell_value(c.v0, vm, um, c.u1), c.depth + 1, seq++),
          make_cell(vm, c.v1, c.u0, um, cell_value(vm, c.v1, c.u0, um), c.depth + 1, seq++),
          make_cell(vm, c.v1, um, c.u1, cell_value(vm, c.v1, um, c.u1), c.depth + 1, seq++)};
      for (const Cell& p : parts) {
        total_err += p.diff;
        heap.push_back(p);
        std::push_heap(heap.begin(), heap.end(), worse);
      }
      res.cells += 16;
    }
    finished.insert(finished.end(), heap.begin(), heap.end());
    std::sort(finished.begin(), finished.end(),
              [](const Cell& a, const Cell& b) { return a.seq < b.seq; });
    std::vector<double> leaves;
    leaves.reserve(finished.size());
    for (const Cell& c : finished) leaves.push_back(c.fine);
    res.value = pairwise_sum(leaves);
    res.abs_error_estimate = total_err;
    res.converged = total_err <= tol_abs;
    return res;
  }

  const Integrand& f_;
  double r_lo_;
  double log_ratio_;
  StripOptions opt_;
};

template <class Integrand>
QuadratureResult integrate_strip(const Integrand& f, double r_lo, double r_hi,
                                 StripOptions opt) {
  return StripIntegrator<Integrand>(f, r_lo, r_hi, opt).run();
}

// K_f(r, theta)^e over one of the two sectors, with an optional extra radial
// weight (the stereographic factor for the spherical energy).
struct DistortionIntegrand {
  const CuspMap* map;
  Region region;
  double exponent;
  double (*radial_weight)(double) = nullptr;

  using State = CuspMap::PreparedRadius;
  State prepare(double r) const { return map->prepare_radius(r); }
  std::pair<double, double> theta_range(const State& s) const {
    if (region == Region::cusp_interior) return {s.b.a, 2.0 * kPi - s.b.a};
    return {-s.b.a, s.b.a};
  }
  double eval(double r, double theta, const State& s) const {
    const double k = map->distortion_prepared(theta, s);
    const double v = std::pow(k, exponent);
    return radial_weight ? v * radial_weight(r) : v;
  }
};

// Plain f(r, theta) over a fixed sector; used by the closed-form oracles.
struct SectorIntegrand {
  double th_lo, th_hi;
  double (*fn)(double r, double theta);

  struct State {};
  State prepare(double) const { return {}; }
  std::pair<double, double> theta_range(const State&) const { return {th_lo, th_hi}; }
  double eval(double r, double theta, const State&) const { return fn(r, theta); }
};

inline int strip_count(double r0, double r1) {
  return std::max(1, static_cast<int>(std::ceil(std::log2(r1 / r0))));
}

template <class Integrand>
QuadratureResult integrate_octaves(const Integrand& f, double r0, double r1,
                                   StripOptions opt) {
  const int n = strip_count(r0, r1);
  StripOptions per = opt;
  per.rel_tol = 0.25 * opt.rel_tol;
  std::vector<double> parts, errs;
  bool all_ok = true;
  std::size_t cells = 0;
  for (int i = 0; i < n; ++i) {
    const double a = r0 * std::pow(r1 / r0, static_cast<double>(i) / n);
    const double b = r0 * std::pow(r1 / r0, static_cast<double>(i + 1) / n);
    const QuadratureResult part = integrate_strip(f, a, b, per);
    parts.push_back(part.value);
    errs.push_back(part.abs_error_estimate);
    all_ok = all_ok && part.converged;
    cells += part.cells;
  }
  QuadratureResult res;
  res.value = pairwise_sum(parts);
  res.abs_error_estimate = pairwise_sum(errs);
  res.cells = cells;
  res.converged = all_ok;
  return res;
}

inline double fit_tail_slope(const std::vector<double>& partials) {
  const std::size_t n = partials.size();
  const std::size_t window = std::min<std::size_t>(8, n);
  std::vector<double> xs, ys;
  for (std::size_t k = n - window; k < n; ++k) {
    if (!(partials[k] > 0.0) || !std::isfinite(partials[k]))
      return std::numeric_limits<double>::infinity();
    xs.push_back(static_cast<double>(k));
    ys.push_back(std::log(partials[k]));
  }
  return fit_slope(xs, ys);
}

}  // namespace detail

// Fixed-sector integral of fn(r, theta) * r dr dtheta over (r0, r1) x
// (th_lo, th_hi); the oracle-facing entry point.
inline QuadratureResult integrate_sector(double (*fn)(double, double), double th_lo,
                                         double th_hi, double r0, double r1,
                                         StripOptions opt = StripOptions()) {
  detail::SectorIntegrand f{th_lo, th_hi, fn};
  return detail::integrate_octaves(f, r0, r1, opt);
}

// Dyadic-annulus profile of K^exponent over a sector region. Each partial is
// resolved to 1e-8 relative; an infinite exponent profiles per-annulus sups
// on a fixed sampling grid instead.
inline AnnulusProfile annulus_profile(const CuspMap& map, Region region, double exponent,
                                      int k_max = 40) {
  if (k_max < 10) throw std::invalid_argument("annulus_profile: need k_max >= 10");
  AnnulusProfile prof;
  prof.exponent = exponent;
  prof.finite_exponent = std::isfinite(exponent);
  detail::DistortionIntegrand f{&map, region, exponent, nullptr};
  StripOptions opt;
  opt.rel_tol = 1e-8;
  for (int k = 0; k < k_max; ++k) {
    const double r_hi = std::pow(2.0, -static_cast<double>(k));
    const double r_lo = 0.5 * r_hi;
    prof.radii.push_back(r_hi);
    if (prof.finite_exponent) {
      prof.partials.push_back(detail::integrate_strip(f, r_lo, r_hi, opt).value);
    } else {
      double sup = 1.0;
      for (int i = 0; i < 12; ++i) {
        const double r = r_lo * std::pow(2.0, (i + 0.5) / 12.0);
        const auto state = f.prepare(r);
        const auto [lo, hi] = f.theta_range(state);
        for (int j = 0; j < 48; ++j) {
          const double theta = lo + (hi - lo) * (j + 0.5) / 48.0;
          sup = std::max(sup, map.distortion_prepared(theta, state));
        }
      }
      prof.partials.push_back(sup);
    }
  }
  prof.slope = detail::fit_tail_slope(prof.partials);
  return prof;
}

// Adaptive integral of K_f^exponent over a sector region of the unit disk.
// Dyadic shells never touch r = 0; the remainder below 2^-k_max enters as a
// fitted geometric tail when the profile decays, otherwise the result is
// flagged non-convergent. An infinite exponent reports the essential sup.
inline QuadratureResult integrate_distortion(const CuspMap& map, Region region,
                                             double exponent, double tol,
                                             int k_max = 40) {
  if (!(tol > 0.0)) throw std::domain_error("integrate_distortion: tolerance <= 0");
  if (!std::isfinite(exponent)) {
    const AnnulusProfile prof = annulus_profile(map, region, exponent, k_max);
    QuadratureResult res;
    res.value = *std::max_element(prof.partials.begin(), prof.partials.end());
    res.cells = prof.partials.size();
    res.converged = prof.convergent();
    return res;
  }
  if (!(exponent >= 1.0))
    throw std::domain_error("integrate_distortion: exponent must be >= 1 or inf");

  detail::DistortionIntegrand f{&map, region, exponent, nullptr};
  StripOptions opt;
  opt.rel_tol = std::min(0.25 * tol, 1e-8);
  QuadratureResult res;
  std::vector<double> parts, errs;
  for (int k = 0; k < k_max; ++k) {
    const double r_hi = std::pow(2.0, -static_cast<double>(k));
    const QuadratureResult part = detail::integrate_strip(f, 0.5 * r_hi, r_hi, opt);
    parts.push_back(part.value);
    errs.push_back(part.abs_error_estimate);
    res.cells += part.cells;
  }
  const double slope = detail::fit_tail_slope(parts);
  const bool decays = slope < -divergence_delta();
  double tail = 0.0;
  if (decays) {
    const double ratio = std::exp(slope);
    tail = parts.back() * ratio / (1.0 - ratio);
  }
  res.value = pairwise_sum(parts) + tail;
  res.abs_error_estimate = pairwise_sum(errs) + 0.1 * tail;
  res.converged = decays && res.abs_error_estimate <= tol * std::max(1.0, std::abs(res.value));
  return res;
}

// Spherical L^p distortion energy 4 * int_{|z|<R} K_f^p / (1+|z|^2)^2 plus the
// analytic bound 4*pi*K_tail^p/(1+R^2) for the truncated far field (the map is
// the identity outside the unit disk, so K_tail = 1).
struct SphericalEnergy {
  QuadratureResult integral;  // the truncated integral, factor 4 included
  double tail_bound = 0.0;

  double total() const { return integral.value + tail_bound; }
};

namespace detail {
inline double stereographic_weight(double r) {
  const double d = 1.0 + r * r;
  return 1.0 / (d * d);
}

struct FarFieldIntegrand {
  struct State {};
  State prepare(double) const { return {}; }
  std::pair<double, double> theta_range(const State&) const { return {0.0, 2.0 * kPi}; }
  double eval(double r, double, const State&) const { return stereographic_weight(r); }
};
}  // namespace detail

inline SphericalEnergy spherical_energy(const CuspMap& map, double p, double R, double tol,
                                        int k_max = 40) {
  if (!(R > 1.0)) throw std::domain_error("spherical_energy: need R > 1");
  if (!(tol > 0.0)) throw std::domain_error("spherical_energy: tolerance <= 0");
  if (!(p >= 1.0)) throw std::domain_error("spherical_energy: need p >= 1");

  StripOptions opt;
  opt.rel_tol = std::min(0.25 * tol, 1e-10);
  std::vector<double> parts, errs;
  bool converged = true;
  std::size_t cells = 0;

  for (Region region : {Region::cusp_interior, Region::complement_in_disk}) {
    detail::DistortionIntegrand f{&map, region, p, &detail::stereographic_weight};
    std::vector<double> shell;
    for (int k = 0; k < k_max; ++k) {
      const double r_hi = std::pow(2.0, -static_cast<double>(k));
      const QuadratureResult part = detail::integrate_strip(f, 0.5 * r_hi, r_hi, opt);
      shell.push_back(part.value);
      errs.push_back(part.abs_error_estimate);
      cells += part.cells;
      converged = converged && part.converged;
    }
    const double slope = detail::fit_tail_slope(shell);
    if (slope < -divergence_delta()) {
      const double ratio = std::exp(slope);
      shell.push_back(shell.back() * ratio / (1.0 - ratio));
    } else {
      converged = false;
    }
    parts.push_back(pairwise_sum(shell));
  }

  detail::FarFieldIntegrand far;
  const QuadratureResult mid = detail::integrate_octaves(far, 1.0, R, opt);
  parts.push_back(mid.value);
  errs.push_back(mid.abs_error_estimate);
  cells += mid.cells;
  converged = converged && mid.converged;

  SphericalEnergy e;
  e.integral.value = 4.0 * pairwise_sum(parts);
  e.integral.abs_error_estimate = 4.0 * pairwise_sum(errs);
  e.integral.cells = cells;
  e.integral.converged = converged;
  e.tail_bound = 4.0 * kPi / (1.0 + R * R);
  return e;
}

}  // namespace cuspflat
