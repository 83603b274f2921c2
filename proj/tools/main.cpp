// Command-line surface: critical exponents, distortion energies, dichotomy
// sweeps, deformed-grid SVG output, and the verification suites.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cuspflat/cuspflat.hpp"

using json = nlohmann::ordered_json;
using namespace cuspflat;

namespace {

std::string format_double(double v, const char* fmt = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

json quadrature_json(const QuadratureResult& r) {
  json j;
  j["value"] = r.value;
  j["abs_error"] = r.abs_error_estimate;
  j["cells"] = r.cells;
  j["converged"] = r.converged;
  return j;
}

int cmd_betacr(const std::string& p_text, const std::string& q_text) {
  const ExtendedRational p = parse_extended(p_text);
  const ExtendedRational q = parse_extended(q_text);
  const ExtendedRational bc = beta_critical(p, q);
  std::cout << bc.to_string() << "\n";
  std::cout << "branch: " << beta_critical_branch(p, q) << "\n";
  return 0;
}

int cmd_energy(double beta, const std::string& p_text, const std::string& q_text,
               double tol, double truncation, int k_max, bool identity) {
  const ExtendedRational pr = parse_extended(p_text);
  const ExtendedRational qr = parse_extended(q_text);
  const double p = pr.to_double();
  const double q = qr.to_double();

  json out;
  if (identity) {
    const CuspMap map = CuspMap::identity_map();
    out["map"] = "identity";
    out["gamma"] = 0.0;
    out["cusp_integral"] = quadrature_json(
        integrate_distortion(map, Region::cusp_interior, std::isfinite(q) ? q : 2.0, tol));
    out["complement_integral"] = quadrature_json(integrate_distortion(
        map, Region::complement_in_disk, std::isfinite(p) ? p : 2.0, tol));
    const SphericalEnergy e =
        spherical_energy(map, std::isfinite(p) ? p : 2.0, truncation, tol, k_max);
    json se = quadrature_json(e.integral);
    se["tail_bound"] = e.tail_bound;
    se["total"] = e.total();
    out["spherical_energy"] = se;
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  const CuspMap map = make_map(beta, ExponentPair(q, p));  // throws when infeasible
  out["beta"] = beta;
  out["p"] = pr.to_string();
  out["q"] = qr.to_string();
  out["gamma"] = map.gamma();
  out["cusp_integral"] =
      quadrature_json(integrate_distortion(map, Region::cusp_interior, q, tol, k_max));
  out["complement_integral"] =
      quadrature_json(integrate_distortion(map, Region::complement_in_disk, p, tol, k_max));
  const double sph_exp = std::isfinite(p) ? p : (std::isfinite(q) ? q : 1.5);
  const SphericalEnergy e = spherical_energy(map, sph_exp, truncation, tol, k_max);
  json se = quadrature_json(e.integral);
  se["exponent"] = sph_exp;
  se["tail_bound"] = e.tail_bound;
  se["total"] = e.total();
  out["spherical_energy"] = se;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const std::string& p_text, const std::string& q_text,
              const std::string& beta_min, const std::string& beta_max,
              const std::string& beta_step, int k_max) {
  const ExtendedRational p = parse_extended(p_text);
  const ExtendedRational q = parse_extended(q_text);
  const Rational lo = parse_rational(beta_min);
  const Rational hi = parse_rational(beta_max);
  const Rational step = parse_rational(beta_step);
  if (!(Rational(0) < step)) throw std::domain_error("sweep: beta-step must be positive");

  std::printf("beta,classification,cusp_slope,complement_slope\n");
  for (Rational b = lo; b <= hi; b = b + step) {
    const CriticalityVerdict v = classify(b, p, q);
    std::string cusp = "nan", comp = "nan";
    if (v.classification == Criticality::subcritical && Rational(1) < b) {
      const CuspMap map = make_map(b.to_double(), ExponentPair(q.to_double(), p.to_double()));
      const AnnulusProfile cp =
          annulus_profile(map, Region::cusp_interior, q.to_double(), k_max);
      const AnnulusProfile xp =
          annulus_profile(map, Region::complement_in_disk, p.to_double(), k_max);
      cusp = format_double(cp.slope, "%.6f");
      comp = format_double(xp.slope, "%.6f");
    }
    std::printf("%s,%s,%s,%s\n", format_double(b.to_double(), "%g").c_str(),
                to_string(v.classification).c_str(), cusp.c_str(), comp.c_str());
  }
  return 0;
}

int cmd_grid(double beta, const std::string& p_text, const std::string& q_text,
             std::size_t resolution, const std::string& out_path) {
  const ExtendedRational p = parse_extended(p_text);
  const ExtendedRational q = parse_extended(q_text);
  const CuspMap map = make_map(beta, ExponentPair(q.to_double(), p.to_double()));
  const GridLines grid = deformed_grid(map, resolution);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("grid: cannot open " + out_path);
  out << to_svg(grid);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

// ---- verification suites ----

struct CheckList {
  json checks = json::array();
  bool all_pass = true;

  void add(const std::string& name, bool pass, const std::string& detail) {
    json c;
    c["name"] = name;
    c["pass"] = pass;
    c["detail"] = detail;
    checks.push_back(c);
    all_pass = all_pass && pass;
  }
};

void verify_reflection(CheckList& list) {
  const CuspMap map = make_map(2.0, ExponentPair(2.0, 2.0));
  const ReflectionMap refl(map);

  double worst = 0.0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const double r = 0.1 + 1.9 * halton(i, 2);
    const PlanePoint z = PolarPoint(r, 2.0 * kPi * halton(i, 3)).to_plane();
    worst = std::max(worst, distance(circle_inversion(circle_inversion(z)), z));
  }
  list.add("psi_involution", worst < 1e-14, "max |psi(psi(z)) - z| = " + format_double(worst));

  worst = 0.0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const double r = 0.1 + 1.9 * halton(i, 2);
    const PlanePoint z = PolarPoint(r, 2.0 * kPi * halton(i, 3)).to_plane();
    const Mat2 d = circle_inversion_jet(z);
    worst = std::max(worst, std::abs(op_norm(d) * op_norm(d) - std::abs(d.det())));
  }
  list.add("psi_anticonformal", worst < 1e-13, "max ||Dpsi|^2 - |J|| = " + format_double(worst));

  worst = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    const double x = 1e-3 * std::pow(0.7 / 1e-3, i / 199.0);
    const auto [up, dn] = cusp_boundary(map.shape(), x);
    worst = std::max({worst, distance(refl.reflect(up), up), distance(refl.reflect(dn), dn)});
  }
  list.add("boundary_fixed", worst < 1e-9, "max boundary drift = " + format_double(worst));

  worst = 0.0;
  for (std::size_t i = 0; i < 10000; ++i) {
    const double r = 1e-3 + (1.0 - 2e-3) * halton(i, 2);
    const PlanePoint z = PolarPoint(r, 2.0 * kPi * halton(i, 3)).to_plane();
    worst = std::max(worst, distance(refl.reflect(refl.reflect(z)), z));
  }
  list.add("involution", worst < 1e-9, "max |g(g(z)) - z| = " + format_double(worst));

  std::size_t flips = 0, total = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const double r = 1e-2 + 0.97 * halton(i, 2);
    const PlanePoint z = PolarPoint(r, 2.0 * kPi * halton(i, 3)).to_plane();
    ++total;
    if (contains(map.shape(), z) != contains(map.shape(), refl.reflect(z))) ++flips;
  }
  list.add("membership_flip", flips == total,
           std::to_string(flips) + "/" + std::to_string(total) + " points flipped");

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t held = 0, boxes = 0;
  double worst_ratio = 0.0;
  while (boxes < 20) {
    const double w = 0.02 + 0.18 * unif(rng);
    const double h = 0.02 + 0.18 * unif(rng);
    const double cx = -0.75 + 1.5 * unif(rng);
    const double cy = -0.75 + 1.5 * unif(rng);
    const Box u{cx - 0.5 * w, cx + 0.5 * w, cy - 0.5 * h, cy + 0.5 * h};
    const double near = std::hypot(std::max({u.x0, 0.0, -u.x1}), std::max({u.y0, 0.0, -u.y1}));
    const double far = std::max(std::hypot(u.x0, u.y0),
                                std::max(std::hypot(u.x1, u.y1),
                                         std::max(std::hypot(u.x0, u.y1), std::hypot(u.x1, u.y0))));
    if (near < 0.1 || far > 0.9) continue;
    ++boxes;
    const ReflectionInequality r = refl.verify_reflection_inequality(u, 2.0, 1e-6);
    if (r.holds) ++held;
    worst_ratio = std::max(worst_ratio, r.lhs / r.rhs);
  }
  list.add("reflection_inequality", held == boxes,
           std::to_string(held) + "/" + std::to_string(boxes) +
               " boxes, worst lhs/rhs = " + format_double(worst_ratio));

  bool lengths_ok = true;
  for (int i = 1; i <= 20; ++i) {
    const double t = 0.7 * i / 20.0;
    lengths_ok = lengths_ok && refl.curve_length_check(t).holds;
  }
  list.add("curve_length", lengths_ok, "l(g(I_t)) >= 2t(1-1e-3) at 20 radii");

  bool iso_ok = true;
  for (double t : {0.2, 0.4, 0.6}) iso_ok = iso_ok && refl.isoperimetric_check(t).holds;
  list.add("isoperimetric", iso_ok, "area(g(U_t)) <= boundary^2/(4 pi)");
}

void verify_boundary(CheckList& list, const std::string& curve_csv) {
  struct Entry {
    std::string name;
    RectifiableCurve curve;
  };
  std::vector<Entry> entries;
  entries.push_back({"circle", make_circle(512)});
  entries.push_back({"square", make_square()});
  entries.push_back({"cusp64", make_cusp_polygon(2.0, 64)});
  if (!curve_csv.empty()) entries.push_back({"user_curve", read_curve_csv(curve_csv)});

  for (const Entry& e : entries) {
    const BoundaryHomeo h = boundary_homeo(e.curve);
    const double log_a = log_condition(e.curve, h, 256);
    const double log_b = log_condition(e.curve, h, 512);
    const double dg_a = douglas_integral(h, 256);
    const double dg_b = douglas_integral(h, 512);
    const bool finite = std::isfinite(log_b) && std::isfinite(dg_b);
    const bool stable = std::abs(log_b - log_a) < 1e-3 * std::abs(log_b) &&
                        std::abs(dg_b - dg_a) < 1e-3 * std::abs(dg_b);
    list.add("finite_stable_" + e.name, finite && stable,
             "log_condition = " + format_double(log_b) +
                 ", douglas = " + format_double(dg_b));
  }

  const double douglas_id =
      douglas_integral([](double a) { return std::polar(1.0, a); }, 512, 1.0);
  list.add("douglas_identity", std::abs(douglas_id - 4.0 * kPi * kPi) < 1e-6,
           "value = " + format_double(douglas_id));
}

void verify_ahlfors(CheckList& list, const std::string& curve_csv) {
  const AhlforsEstimate circle = ahlfors_gamma(make_circle(1024), 1.0, 128);
  list.add("circle_gamma", circle.gamma >= 0.99 && circle.gamma <= 1.0,
           "gamma = " + format_double(circle.gamma));

  const AhlforsEstimate tip = ahlfors_gamma(CuspShape(2.0), 1.0, 200);
  list.add("cusp_growth_exponent", std::abs(tip.fitted_exponent - (-1.0)) < 0.05,
           "fitted exponent = " + format_double(tip.fitted_exponent));

  const AhlforsEstimate reg1 = ahlfors_gamma(CuspShape(2.0), 0.5, 200);
  const AhlforsEstimate reg2 = ahlfors_gamma(CuspShape(2.0), 0.5, 400);
  const bool bounded = reg2.gamma / reg1.gamma < 1.05;
  list.add("cusp_regular_at_inv_beta", bounded,
           "gamma = " + format_double(reg2.gamma) + " at alpha = 1/2");

  if (!curve_csv.empty()) {
    const AhlforsEstimate user = ahlfors_gamma(read_curve_csv(curve_csv), 1.0, 128);
    list.add("user_curve_gamma", std::isfinite(user.gamma),
             "gamma = " + format_double(user.gamma));
  }
}

int cmd_verify(const std::string& suite, const std::string& curve_csv) {
  json out;
  out["suite"] = suite;
  CheckList list;
  if (suite == "reflection" || suite == "all") verify_reflection(list);
  if (suite == "boundary" || suite == "all") verify_boundary(list, curve_csv);
  if (suite == "ahlfors" || suite == "all") verify_ahlfors(list, curve_csv);
  out["checks"] = list.checks;
  out["pass"] = list.all_pass;
  std::cout << out.dump(2) << "\n";
  return list.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cusp-flattening maps of power-cusp disks: construction, distortion "
               "energies, critical exponents, reflections, boundary conditions"};
  app.require_subcommand(1);

  std::string p_text = "2", q_text = "2";
  double beta = 2.0, tol = 1e-6, truncation = 100.0;
  int k_max = 40;
  bool identity = false;
  std::string beta_min = "4", beta_max = "6", beta_step = "0.5";
  std::size_t resolution = 64;
  std::string out_path = "grid.svg";
  std::string suite = "all";
  std::string curve_csv;

  CLI::App* betacr = app.add_subcommand("betacr", "critical cusp power beta_cr(p, q)");
  betacr->add_option("--p", p_text, "exponent p (rational a/b, decimal, or inf)");
  betacr->add_option("--q", q_text, "exponent q (rational a/b, decimal, or inf)");

  CLI::App* energy =
      app.add_subcommand("energy", "distortion integrals and spherical energy (JSON)");
  energy->add_option("--beta", beta, "cusp power");
  energy->add_option("--p", p_text, "complement exponent");
  energy->add_option("--q", q_text, "cusp-side exponent");
  energy->add_option("--tol", tol, "relative tolerance");
  energy->add_option("--R", truncation, "spherical truncation radius");
  energy->add_option("--kmax", k_max, "dyadic shell count");
  energy->add_flag("--identity", identity, "evaluate the identity map instead");

  CLI::App* sweep = app.add_subcommand("sweep", "dichotomy sweep over beta (CSV)");
  sweep->add_option("--p", p_text, "complement exponent");
  sweep->add_option("--q", q_text, "cusp-side exponent");
  sweep->add_option("--beta-min", beta_min, "first beta");
  sweep->add_option("--beta-max", beta_max, "last beta");
  sweep->add_option("--beta-step", beta_step, "beta increment");
  sweep->add_option("--kmax", k_max, "dyadic shell count");

  CLI::App* grid = app.add_subcommand("grid", "deformed polar grid as SVG");
  grid->add_option("--beta", beta, "cusp power");
  grid->add_option("--p", p_text, "complement exponent");
  grid->add_option("--q", q_text, "cusp-side exponent");
  grid->add_option("--resolution", resolution, "rays in the grid");
  grid->add_option("--out", out_path, "output SVG path");

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite (JSON)");
  verify->add_option("--suite", suite, "reflection | boundary | ahlfors | all")
      ->check(CLI::IsMember({"reflection", "boundary", "ahlfors", "all"}));
  verify->add_option("--curve", curve_csv, "extra curve CSV (x,y per line)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (betacr->parsed()) return cmd_betacr(p_text, q_text);
    if (energy->parsed())
      return cmd_energy(beta, p_text, q_text, tol, truncation, k_max, identity);
    if (sweep->parsed())
      return cmd_sweep(p_text, q_text, beta_min, beta_max, beta_step, k_max);
    if (grid->parsed()) return cmd_grid(beta, p_text, q_text, resolution, out_path);
    if (verify->parsed()) return cmd_verify(suite, curve_csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
