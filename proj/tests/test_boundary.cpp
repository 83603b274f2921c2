#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include "cuspflat/boundary.hpp"

using namespace cuspflat;
using Catch::Approx;

namespace {

// point -> arclength on the polyline, for the monotonicity property
double project_arclength(const RectifiableCurve& c, PlanePoint p) {
  double best = 1e300, best_s = 0.0;
  const std::size_t n = c.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const PlanePoint a = c.vertices[i];
    const PlanePoint b = c.vertices[(i + 1) % n];
    const double len = distance(a, b);
    const double t = std::clamp(
        ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len), 0.0, 1.0);
    const PlanePoint q{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    const double d = distance(p, q);
    if (d < best) {
      best = d;
      best_s = c.cumulative[i] + t * len;
    }
  }
  return best_s;
}

}  // namespace

TEST_CASE("curve validation") {
  CHECK_THROWS_AS(RectifiableCurve::from_vertices({{0, 0}, {1, 0}}), std::invalid_argument);
  // clockwise square rejected
  CHECK_THROWS_AS(RectifiableCurve::from_vertices({{0, 0}, {0, 1}, {1, 1}, {1, 0}}),
                  std::invalid_argument);
  // bowtie rejected
  CHECK_THROWS_AS(RectifiableCurve::from_vertices({{0, 0}, {1, 1}, {1, 0}, {0, 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(RectifiableCurve::from_vertices({{0, 0}, {1, 0}, {1, 0}, {0, 1}}),
                  std::invalid_argument);
}

TEST_CASE("arclength point on the unit square") {
  const RectifiableCurve sq = make_square();
  CHECK(distance(sq.arclength_point(0.0), {0.0, 0.0}) == 0.0);
  CHECK(distance(sq.arclength_point(1.0), {1.0, 0.0}) == 0.0);
  CHECK(distance(sq.arclength_point(0.5), {0.5, 0.0}) < 1e-15);
  CHECK(distance(sq.arclength_point(2.5), {0.5, 1.0}) < 1e-15);
  CHECK(sq.total_length() == 4.0);
  CHECK_THROWS_AS(sq.arclength_point(4.0), std::domain_error);
  CHECK_THROWS_AS(sq.arclength_point(-0.1), std::domain_error);
}

TEST_CASE("boundary homeomorphism on a circle is rotation and scaling") {
  const double radius = 2.5;
  const RectifiableCurve circ = make_circle(512, radius);
  const BoundaryHomeo h = boundary_homeo(circ);
  for (int k = 0; k < 64; ++k) {
    const double alpha = 2.0 * kPi * k / 64.0;  // a vertex preimage (512/64 aligned)
    const PlanePoint want{radius * std::cos(alpha), radius * std::sin(alpha)};
    CHECK(distance(h.evaluate_angle(alpha), want) < 1e-12);
  }
}

TEST_CASE("boundary homeomorphism on the unit square") {
  const RectifiableCurve sq = make_square();
  const BoundaryHomeo h = boundary_homeo(sq);
  CHECK(distance(h.evaluate({1.0, 0.0}), {0.0, 0.0}) < 1e-15);  // phi(1) = base vertex
  // phi(i): a quarter of the perimeter, arclength 1
  CHECK(distance(h.evaluate({0.0, 1.0}), {1.0, 0.0}) < 1e-12);
}

TEST_CASE("boundary homeomorphism is monotone on random star polygons") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<PlanePoint> pts;
    const int n = 40;
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * kPi * i / n;
      const double r = unif(rng);
      pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    const RectifiableCurve curve = RectifiableCurve::from_vertices(pts);
    const BoundaryHomeo h = boundary_homeo(curve);
    double prev = -1.0;
    for (int k = 0; k < 200; ++k) {
      const double alpha = 2.0 * kPi * (k + 0.25) / 200.0;
      const double s = project_arclength(curve, h.evaluate_angle(alpha));
      if (k > 0) CHECK(s > prev);
      prev = s;
    }
  }
}

TEST_CASE("constant speed away from vertices") {
  const RectifiableCurve sq = make_square();
  const BoundaryHomeo h = boundary_homeo(sq);
  const double want = 4.0 / (2.0 * kPi);
  const double fd = 1e-8;
  for (double alpha : {0.3, 1.0, 2.2, 4.0, 5.5}) {
    const double speed =
        distance(h.evaluate_angle(alpha + fd), h.evaluate_angle(alpha - fd)) / (2.0 * fd);
    CHECK(speed == Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("log condition on the circle matches the 1-D oracle") {
  // independent oracle: the double integral on a circle reduces to
  // (l/2pi)^2 * 2pi * int_0^{2pi} |log(2 sin(u/2))| du
  const double i0 = integrate_1d(
      [](double u) { return std::abs(std::log(2.0 * std::sin(0.5 * u))); }, 1e-9,
      2.0 * kPi - 1e-9, 1e-9);
  CHECK(i0 == Approx(4.0597664256).epsilon(1e-6));  // 4 Cl2(pi/3)
  // the signed integral vanishes, a partial closed-form check
  const double signed_integral = integrate_1d(
      [](double u) { return std::log(2.0 * std::sin(0.5 * u)); }, 1e-9, 2.0 * kPi - 1e-9,
      1e-9);
  CHECK(std::abs(signed_integral) < 1e-6);

  const RectifiableCurve circ = make_circle(4096);
  const BoundaryHomeo h = boundary_homeo(circ);
  const double l = circ.total_length();
  const double want = l * l / (2.0 * kPi) * i0;
  const double got = log_condition(circ, h, 1024);
  CHECK(got == Approx(want).epsilon(2e-3));
}

TEST_CASE("log condition is finite and stable for the test shapes") {
  struct Entry {
    const char* name;
    RectifiableCurve curve;
  };
  const Entry entries[] = {
      {"circle", make_circle(256)},
      {"square", make_square()},
      {"triangle", RectifiableCurve::from_vertices({{0, 0}, {1, 0}, {0.5, 0.9}})},
      {"lshape",
       RectifiableCurve::from_vertices({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}})},
      {"cusp64", make_cusp_polygon(2.0, 64)},
  };
  for (const Entry& e : entries) {
    const BoundaryHomeo h = boundary_homeo(e.curve);
    const double a = log_condition(e.curve, h, 256);
    const double b = log_condition(e.curve, h, 512);
    INFO(e.name << ": " << a << " -> " << b);
    CHECK(std::isfinite(b));
    CHECK(b > 0.0);
    CHECK(std::abs(b - a) < 1e-3 * std::abs(b));
  }
  CHECK_THROWS_AS(log_condition(make_square(), boundary_homeo(make_square()), 32),
                  std::invalid_argument);
}

TEST_CASE("log condition scales quadratically with the curve") {
  const RectifiableCurve sq = make_square();
  std::vector<PlanePoint> scaled;
  for (PlanePoint p : sq.vertices) scaled.push_back({3.0 * p.x, 3.0 * p.y});
  const RectifiableCurve big = RectifiableCurve::from_vertices(scaled);
  const double small_v = log_condition(sq, boundary_homeo(sq), 256);
  const double big_v = log_condition(big, boundary_homeo(big), 256);
  CHECK(big_v == Approx(9.0 * small_v).epsilon(1e-12));
}

TEST_CASE("douglas integral of the identity boundary map") {
  const double v = douglas_integral([](double a) { return std::polar(1.0, a); }, 512, 1.0);
  CHECK(std::abs(v - 4.0 * kPi * kPi) < 1e-6);
  // rotations of the circle leave the integrand at 1
  const double rotated = douglas_integral(
      [](double a) { return std::polar(1.0, a + 0.7); }, 512, 1.0);
  CHECK(std::abs(rotated - 4.0 * kPi * kPi) < 1e-6);
}

TEST_CASE("douglas integral of the square boundary map is finite and stable") {
  const RectifiableCurve sq = make_square();
  const BoundaryHomeo h = boundary_homeo(sq);
  const double a = douglas_integral(h, 256);
  const double b = douglas_integral(h, 512);
  CHECK(std::isfinite(b));
  CHECK(std::abs(b - a) < 1e-3 * std::abs(b));
  CHECK_THROWS_AS(douglas_integral(h, 16), std::invalid_argument);
}

TEST_CASE("douglas integral is invariant under rigid motions") {
  const RectifiableCurve sq = make_square();
  const double phi0 = 0.83;
  std::vector<PlanePoint> moved;
  for (PlanePoint p : sq.vertices)
    moved.push_back({std::cos(phi0) * p.x - std::sin(phi0) * p.y + 5.0,
                     std::sin(phi0) * p.x + std::cos(phi0) * p.y - 2.0});
  const RectifiableCurve rot = RectifiableCurve::from_vertices(moved);
  const double a = douglas_integral(boundary_homeo(sq), 256);
  const double b = douglas_integral(boundary_homeo(rot), 256);
  CHECK(a == Approx(b).epsilon(1e-12));
}

TEST_CASE("curve CSV roundtrip") {
  const RectifiableCurve sq = make_square();
  const std::string path = "test_curve_roundtrip.csv";
  write_curve_csv(path, sq);
  const RectifiableCurve back = read_curve_csv(path);
  REQUIRE(back.vertices.size() == sq.vertices.size());
  for (std::size_t i = 0; i < sq.vertices.size(); ++i)
    CHECK(distance(back.vertices[i], sq.vertices[i]) < 1e-12);
  std::remove(path.c_str());
}
