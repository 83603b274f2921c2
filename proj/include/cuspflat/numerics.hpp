#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cuspflat {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Gauss-Legendre 5 on [-1,1]; exact through degree 9.
inline constexpr std::array<double, 5> kGL5Nodes = {
    -0.9061798459386639928, -0.5384693101056830910, 0.0,
    0.5384693101056830910, 0.9061798459386639928};
inline constexpr std::array<double, 5> kGL5Weights = {
    0.2369268850561890875, 0.4786286704993664680, 0.5688888888888888889,
    0.4786286704993664680, 0.2369268850561890875};

// Fixed-order pairwise summation; the reduction tree depends only on the
// index order of the inputs, so results are reproducible run to run.
inline double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n <= 4) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& values) {
  return pairwise_sum(std::span<const double>(values));
}

namespace detail {

inline double gl5(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += kGL5Weights[i] * f(mid + half * kGL5Nodes[i]);
  return s * half;
}

inline void integrate_1d_rec(const std::function<double(double)>& f, double a, double b,
                             double coarse, double tol, int depth, double& value,
                             double& err) {
  const double mid = 0.5 * (a + b);
  const double left = gl5(f, a, mid);
  const double right = gl5(f, mid, b);
  const double fine = left + right;
  const double diff = std::abs(fine - coarse);
  if (depth >= 30 || diff <= tol) {
    value += fine;
    err += diff;
    return;
  }
  integrate_1d_rec(f, a, mid, left, 0.5 * tol, depth + 1, value, err);
  integrate_1d_rec(f, mid, b, right, 0.5 * tol, depth + 1, value, err);
}

}  // namespace detail

// Adaptive 1-D quadrature (GL5 with bisection refinement).
inline double integrate_1d(const std::function<double(double)>& f, double a, double b,
                           double tol, double* err_out = nullptr) {
  double value = 0.0, err = 0.0;
  const double coarse = detail::gl5(f, a, b);
  const double abs_tol = tol * std::max(1.0, std::abs(coarse));
  detail::integrate_1d_rec(f, a, b, coarse, abs_tol, 0, value, err);
  if (err_out) *err_out = err;
  return value;
}

// Least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need >= 2 matched samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

// Halton low-discrepancy sequence, used for deterministic quasi-random
// sampling in the property tests and verification sweeps.
inline double halton(std::size_t index, unsigned base) {
  double f = 1.0, r = 0.0;
  std::size_t i = index + 1;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  static Mat2 id() { return {}; }
  static Mat2 rotation(double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return {c, -s, s, c};
  }

  double det() const { return a11 * a22 - a12 * a21; }

  Mat2 inverse() const {
    const double d = det();
    if (d == 0.0) throw std::domain_error("Mat2: singular matrix");
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
  }
};

struct SingularValues {
  double s_max = 0.0;
  double s_min = 0.0;
};

// Closed-form singular values of a real 2x2 matrix [[a,b],[c,d]].
inline SingularValues singular_values_2x2(double a, double b, double c, double d) {
  const double e = 0.5 * (a + d);
  const double f = 0.5 * (a - d);
  const double g = 0.5 * (c + b);
  const double h = 0.5 * (c - b);
  const double q1 = std::hypot(e, h);
  const double q2 = std::hypot(f, g);
  return {q1 + q2, std::abs(q1 - q2)};
}

inline double op_norm(const Mat2& m) {
  return singular_values_2x2(m.a11, m.a12, m.a21, m.a22).s_max;
}

namespace detail {

struct BoxCell {
  double x0, x1, y0, y1;
  double coarse;
  int depth;
};

inline double box_cell_value(const std::function<double(double, double)>& f, double x0,
                             double x1, double y0, double y1) {
  const double xm = 0.5 * (x0 + x1), xh = 0.5 * (x1 - x0);
  const double ym = 0.5 * (y0 + y1), yh = 0.5 * (y1 - y0);
  double total = 0.0;
  for (int i = 0; i < 5; ++i) {
    double row = 0.0;
    for (int j = 0; j < 5; ++j)
      row += kGL5Weights[j] * f(xm + xh * kGL5Nodes[i], ym + yh * kGL5Nodes[j]);
    total += kGL5Weights[i] * row;
  }
  return total * xh * yh;
}

}  // namespace detail

// Adaptive GL5x5 quadrature over an axis-aligned rectangle.
inline double integrate_box(const std::function<double(double, double)>& f, double x0,
                            double x1, double y0, double y1, double rel_tol,
                            int max_depth = 14, double* err_out = nullptr) {
  const double total_area = (x1 - x0) * (y1 - y0);
  double tol_abs = std::abs(detail::box_cell_value(f, x0, x1, y0, y1)) * rel_tol;
  if (tol_abs == 0.0) tol_abs = rel_tol;
  double value = 0.0, err = 0.0;
  for (int pass = 0; pass < 3; ++pass) {
    value = 0.0;
    err = 0.0;
    std::vector<double> leaves;
    std::vector<detail::BoxCell> stack;
    stack.push_back({x0, x1, y0, y1, detail::box_cell_value(f, x0, x1, y0, y1), 0});
    while (!stack.empty()) {
      const detail::BoxCell c = stack.back();
      stack.pop_back();
      const double xm = 0.5 * (c.x0 + c.x1), ym = 0.5 * (c.y0 + c.y1);
      const double c00 = detail::box_cell_value(f, c.x0, xm, c.y0, ym);
      const double c01 = detail::box_cell_value(f, c.x0, xm, ym, c.y1);
      const double c10 = detail::box_cell_value(f, xm, c.x1, c.y0, ym);
      const double c11 = detail::box_cell_value(f, xm, c.x1, ym, c.y1);
      const double fine = (c00 + c01) + (c10 + c11);
      const double diff = std::abs(fine - c.coarse);
      const double frac = (c.x1 - c.x0) * (c.y1 - c.y0) / total_area;
      if (diff <= tol_abs * frac || c.depth >= max_depth) {
        leaves.push_back(fine);
        err += diff;
        continue;
      }
      stack.push_back({xm, c.x1, ym, c.y1, c11, c.depth + 1});
      stack.push_back({xm, c.x1, c.y0, ym, c10, c.depth + 1});
      stack.push_back({c.x0, xm, ym, c.y1, c01, c.depth + 1});
      stack.push_back({c.x0, xm, c.y0, ym, c00, c.depth + 1});
    }
    value = pairwise_sum(leaves);
    const double want = std::abs(value) * rel_tol;
    if (want <= 0.0 || tol_abs <= 2.0 * want) break;
    tol_abs = want;
  }
  if (err_out) *err_out = err;
  return value;
}

// Distortion |A|^2/|det A| of a 2x2 matrix, scale-normalized so that very
// large or tiny entries (deep-annulus probe maps) cannot overflow.
inline double distortion_of_matrix(double a, double b, double c, double d) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (scale == 0.0) throw std::domain_error("distortion_of_matrix: zero matrix");
  const double an = a / scale, bn = b / scale, cn = c / scale, dn = d / scale;
  const double det = an * dn - bn * cn;
  if (det == 0.0) return std::numeric_limits<double>::infinity();
  const auto sv = singular_values_2x2(an, bn, cn, dn);
  return sv.s_max * sv.s_max / std::abs(det);
}

}  // namespace cuspflat
