#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cuspflat/geometry.hpp"

using namespace cuspflat;
using Catch::Approx;

namespace {

// Independent oracle for the abscissa equation: plain bisection on [0, r].
double bisect_t(double r, double beta) {
  double lo = 0.0, hi = r;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = mid * mid + std::pow(mid, 2.0 * beta) - r * r;
    if (f > 0.0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("solve_t closed form and asymptotics") {
  CHECK(solve_t(0.5, 1.0) == Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));
  // t^(2 beta) is negligible as r -> 0, so t/r -> 1
  for (double r : {1e-4, 1e-6, 1e-8}) CHECK(solve_t(r, 2.0) / r == Approx(1.0).margin(1e-7));
}

TEST_CASE("solve_t matches the bisection oracle at r = 1, beta = 2") {
  const double oracle = bisect_t(1.0, 2.0);
  CHECK(oracle == Approx(0.786151377757).epsilon(1e-12));  // golden-ratio root
  CHECK(solve_t(1.0, 2.0) == Approx(oracle).epsilon(1e-12));
  // t^2 = (sqrt(5) - 1)/2 exactly
  const double t = solve_t(1.0, 2.0);
  CHECK(t * t == Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("solve_t residual, monotonicity and t < r <= sqrt(2) t") {
  for (double beta : {1.5, 2.0, 3.0, 4.9}) {
    double prev = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double r = 1.4 * i / 200.0;
      const double t = solve_t(r, beta);
      const double res = std::abs(t * t + std::pow(t, 2.0 * beta) - r * r);
      CHECK(res <= 1e-14 * std::max(1.0, r * r));
      CHECK(t > prev);
      CHECK(t < r);
      if (r < std::sqrt(2.0)) CHECK(r < t * std::sqrt(2.0));
      prev = t;
    }
  }
  // beta = 1 sits exactly on r = sqrt(2) t
  CHECK(solve_t(0.3, 1.0) * std::sqrt(2.0) == Approx(0.3).epsilon(1e-15));
  CHECK_THROWS_AS(solve_t(0.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(solve_t(-1.0, 2.0), std::domain_error);
}

TEST_CASE("sector bounds") {
  const CuspShape beta1(1.0), beta2(2.0);
  CHECK(sector_bounds(0.5, beta1).a == Approx(kPi / 4.0).epsilon(1e-15));
  CHECK(sector_bounds(0.999999, beta2).a ==
        Approx(std::atan(solve_t(0.999999, 2.0))).epsilon(1e-12));
  // a -> 0 like t as r -> 0
  for (double r : {1e-3, 1e-5}) {
    const SectorBounds b = sector_bounds(r, beta2);
    CHECK(b.a == Approx(b.t).epsilon(1e-5));
  }
  // 0 < a <= pi/4, equality only at beta = 1
  for (double r : {0.1, 0.5, 0.9}) {
    CHECK(sector_bounds(r, beta2).a < kPi / 4.0);
    CHECK(sector_bounds(r, beta2).a > 0.0);
    CHECK(sector_bounds(r, beta1).a == Approx(kPi / 4.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(sector_bounds(0.0, beta2), std::domain_error);
  CHECK_THROWS_AS(sector_bounds(1.0, beta2), std::domain_error);
}

TEST_CASE("containment of inward and outward cusp disks") {
  const CuspShape inward(2.0);
  CHECK(contains(inward, {-1.0, 0.0}));
  CHECK_FALSE(contains(inward, {0.5, 0.0}));     // removed wedge axis
  CHECK(contains(inward, {0.5, 0.3}));           // above the wedge, inside the ball
  CHECK_FALSE(contains(inward, {0.5, 0.25}));    // exactly on |y| = x^2 (open domain)
  CHECK_FALSE(contains(inward, {-1.0 + std::sqrt(5.0), 0.0}));  // on the circle

  const CuspShape outward(2.0, CuspOrientation::outward);
  CHECK(contains(outward, {0.5, 0.2}));          // inside the wedge
  CHECK(contains(outward, {3.0, 0.0}));          // inside the ball at 1 + beta
  CHECK_FALSE(contains(outward, {-0.5, 0.0}));
}

TEST_CASE("containment is consistent with the sector decomposition") {
  const CuspShape shape(2.0);
  for (int i = 1; i < 20; ++i) {
    const double r = i / 20.0;
    const SectorBounds b = sector_bounds(r, shape);
    for (int j = 1; j < 24; ++j) {
      const double theta = b.a + (2.0 * kPi - 2.0 * b.a) * j / 24.0;
      if (theta >= 2.0 * kPi - b.a) continue;
      CHECK(contains(shape, PolarPoint(r, theta).to_plane()));
    }
    // strictly inside the complement sector: not in the domain
    const double inner = 0.5 * b.a;
    CHECK_FALSE(contains(shape, PolarPoint(r, inner).to_plane()));
    CHECK_FALSE(contains(shape, PolarPoint(r, 2.0 * kPi - inner).to_plane()));
  }
}

TEST_CASE("cusp boundary points") {
  const CuspShape b2(2.0), b1(1.0), b43(4.0 / 3.0);
  auto [up, dn] = cusp_boundary(b2, 0.5);
  CHECK(up.x == 0.5);
  CHECK(up.y == Approx(0.25).epsilon(1e-15));
  CHECK(dn.y == Approx(-0.25).epsilon(1e-15));
  auto [u1, d1] = cusp_boundary(b1, 1.0);
  CHECK(u1.y == Approx(1.0));
  CHECK(d1.y == Approx(-1.0));
  // independent evaluation of 0.3^(4/3)
  auto [u43, d43] = cusp_boundary(b43, 0.3);
  CHECK(u43.y == Approx(std::exp((4.0 / 3.0) * std::log(0.3))).epsilon(1e-14));
  CHECK(u43.y == Approx(0.2008298850).epsilon(1e-9));
  CHECK(d43.y == -u43.y);
  CHECK_THROWS_AS(cusp_boundary(b2, 0.0), std::domain_error);
  CHECK_THROWS_AS(cusp_boundary(b2, -0.1), std::domain_error);
}

TEST_CASE("cusp shape invariants") {
  const CuspShape s(2.0);
  CHECK(s.disk_radius() == Approx(std::sqrt(5.0)));
  CHECK(s.disk_center_x() == Approx(-1.0));
  const CuspShape o(2.0, CuspOrientation::outward);
  CHECK(o.disk_center_x() == Approx(3.0));
  CHECK_THROWS_AS(CuspShape(0.5), std::invalid_argument);
}

TEST_CASE("wedge area formula") {
  CHECK(cusp_wedge_area(1.0, 1.0) == 1.0);  // 2/(1+1)
  CHECK(cusp_wedge_area(0.5, 2.0) == Approx(2.0 * std::pow(0.5, 3.0) / 3.0).epsilon(1e-15));
}
