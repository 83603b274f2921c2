#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuspflat/mapping.hpp"
#include "cuspflat/quadrature.hpp"
#include "cuspflat/rational.hpp"

namespace cuspflat {

// Critical cusp power beta_cr(p, q), exact on rationals:
//   (pq + 2p + q) / (pq - q)   for finite p, q
//   2/q + 1                    for p = inf
//   (p+1)/(p-1)                for q = inf
// and 1 in the doubly infinite limit (bounded distortion admits no cusp).
inline ExtendedRational beta_critical(const ExtendedRational& p, const ExtendedRational& q) {
  if (p.is_finite() && !(Rational(1) < p.value))
    throw std::domain_error("beta_critical: need p > 1");
  if (q.is_finite() && !(Rational(1) <= q.value))
    throw std::domain_error("beta_critical: need q >= 1");
  if (!p.is_finite() && !q.is_finite()) return ExtendedRational(Rational(1));
  if (!p.is_finite()) return ExtendedRational(Rational(2) / q.value + Rational(1));
  if (!q.is_finite())
    return ExtendedRational((p.value + Rational(1)) / (p.value - Rational(1)));
  const Rational pq = p.value * q.value;
  return ExtendedRational((pq + Rational(2) * p.value + q.value) / (pq - q.value));
}

inline const char* beta_critical_branch(const ExtendedRational& p, const ExtendedRational& q) {
  if (!p.is_finite() && !q.is_finite()) return "limit p,q->inf";
  if (!p.is_finite()) return "2/q + 1";
  if (!q.is_finite()) return "(p+1)/(p-1)";
  return "(pq+2p+q)/(pq-q)";
}

inline double beta_critical(double p, double q) {
  if (std::isfinite(p) && !(p > 1.0)) throw std::domain_error("beta_critical: need p > 1");
  if (std::isfinite(q) && !(q >= 1.0)) throw std::domain_error("beta_critical: need q >= 1");
  return detail::beta_critical_double(p, q);
}

// Largest p for which the beta-cusp is an L^p-quasidisk; the inverse of
// beta_critical at p = q.
inline Rational max_p_for_beta(const Rational& beta) {
  if (!(Rational(1) < beta)) throw std::domain_error("max_p_for_beta: need beta > 1");
  return (beta + Rational(3)) / (beta - Rational(1));
}

inline double max_p_for_beta(double beta) {
  if (!(beta > 1.0)) throw std::domain_error("max_p_for_beta: need beta > 1");
  return (beta + 3.0) / (beta - 1.0);
}

enum class Criticality { subcritical, critical, supercritical };

inline std::string to_string(Criticality c) {
  switch (c) {
    case Criticality::subcritical: return "subcritical";
    case Criticality::critical: return "critical";
    default: return "supercritical";
  }
}

// Empirical side of a verdict: fitted annulus slopes for the two regions (or
// for the best forced-gamma probe above criticality) and whether the profiled
// behavior agrees with the analytic classification.
struct EmpiricalEvidence {
  double gamma = 0.0;
  double cusp_slope = 0.0;
  double complement_slope = 0.0;
  bool agrees = false;
};

struct CriticalityVerdict {
  double beta_cr = 0.0;
  Criticality classification = Criticality::subcritical;
  std::optional<EmpiricalEvidence> empirical;
};

// Exact classification; equality with beta_cr counts as nonexistence.
inline CriticalityVerdict classify(const Rational& beta, const ExtendedRational& p,
                                   const ExtendedRational& q) {
  CriticalityVerdict v;
  const ExtendedRational bc = beta_critical(p, q);
  v.beta_cr = bc.to_double();
  if (!bc.is_finite() || beta < bc.value) v.classification = Criticality::subcritical;
  else if (beta == bc.value) v.classification = Criticality::critical;
  else v.classification = Criticality::supercritical;
  return v;
}

inline CriticalityVerdict classify(double beta, double p, double q) {
  CriticalityVerdict v;
  v.beta_cr = beta_critical(p, q);
  if (beta < v.beta_cr) v.classification = Criticality::subcritical;
  else if (beta == v.beta_cr) v.classification = Criticality::critical;
  else v.classification = Criticality::supercritical;
  return v;
}

namespace detail {

inline CuspMap forced_probe_map(double beta, double gamma) {
  if (gamma <= 0.0)
    return CuspMap::forced(CuspShape(beta), 0.0, CuspMap::RadialKind::identity);
  return CuspMap::forced(CuspShape(beta), gamma, CuspMap::RadialKind::exponential);
}

inline bool both_convergent(const AnnulusProfile& cusp, const AnnulusProfile& comp) {
  return cusp.convergent() && comp.convergent();
}

// The supercritical probe grid: 30 uniform gamma values spanning past both
// constraints, plus the endpoints of the (empty) admissible window.
inline std::vector<double> probe_gammas(double beta, const ExponentPair& exps) {
  const double upper = exps.q_finite() ? 2.0 / exps.q : 0.0;
  const double lower =
      exps.p_finite() ? std::max((beta * (exps.p - 1.0) - (exps.p + 1.0)) / exps.p, 0.0)
                      : beta - 1.0;
  const double top = std::max({beta - 1.0, upper, 1.0}) + 0.1;
  std::vector<double> gammas;
  for (int i = 0; i < 30; ++i) gammas.push_back(top * i / 29.0);
  gammas.push_back(lower);
  gammas.push_back(upper);
  return gammas;
}

}  // namespace detail

// Profiles the constructed map (subcritical) or a forced-gamma probe grid
// (critical/supercritical) and reports whether the dyadic-annulus verdicts
// agree with the analytic classification. The probe sweep is a surrogate for
// the nonexistence statement: it certifies that no probed gamma makes both
// distortion integrals decay.
inline CriticalityVerdict empirical_verdict(double beta, double p, double q, int k_max = 40) {
  const ExponentPair exps(q, p);
  CriticalityVerdict v = classify(beta, p, q);
  EmpiricalEvidence e;
  if (v.classification == Criticality::subcritical) {
    const CuspMap map = make_map(beta, exps);
    const AnnulusProfile cusp = annulus_profile(map, Region::cusp_interior, q, k_max);
    const AnnulusProfile compl_ = annulus_profile(map, Region::complement_in_disk, p, k_max);
    e.gamma = map.gamma();
    e.cusp_slope = cusp.slope;
    e.complement_slope = compl_.slope;
    e.agrees = detail::both_convergent(cusp, compl_);
  } else {
    // Nonexistence side: record the probe whose worse region decays best.
    double best_score = std::numeric_limits<double>::infinity();
    bool any_convergent = false;
    for (double gamma : detail::probe_gammas(beta, exps)) {
      const CuspMap probe = detail::forced_probe_map(beta, gamma);
      const AnnulusProfile cusp = annulus_profile(probe, Region::cusp_interior, q, k_max);
      const AnnulusProfile compl_ =
          annulus_profile(probe, Region::complement_in_disk, p, k_max);
      any_convergent = any_convergent || detail::both_convergent(cusp, compl_);
      const double margin_c = cusp.finite_exponent ? cusp.slope + divergence_delta()
                                                   : cusp.slope - divergence_delta();
      const double margin_x = compl_.finite_exponent ? compl_.slope + divergence_delta()
                                                     : compl_.slope - divergence_delta();
      const double score = std::max(margin_c, margin_x);
      if (score < best_score) {
        best_score = score;
        e.gamma = gamma;
        e.cusp_slope = cusp.slope;
        e.complement_slope = compl_.slope;
      }
    }
    e.agrees = !any_convergent;
  }
  v.empirical = e;
  return v;
}

}  // namespace cuspflat
