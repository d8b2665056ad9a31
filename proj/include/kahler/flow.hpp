#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kahler/tensor.hpp"

namespace kahler {

/// Reaction term of the curvature evolution on the diagonal components:
/// entry (a, b) = sum_{m,v} ( R_{a abar m vbar} R_{v mbar b bbar}
///                           - |R_{a mbar b vbar}|^2 + |R_{a bbar m vbar}|^2 ).
RMatrix reaction_diagonal(const KahlerCurvatureTensor& t);

/// Full quadratic Q(R) whose diagonal restriction is reaction_diagonal:
///   Q_{a bbar c dbar} = sum_{m,v} ( R_{a bbar m vbar} R_{v mbar c dbar}
///                                 - R_{a mbar c vbar} R_{m bbar v dbar}
///                                 + R_{a dbar m vbar} R_{v mbar c bbar} ).
/// Checks Kahler symmetry, the diagonal restriction and the double trace
/// sum_{a,b} Q_{a abar b bbar} = |Ric|^2, throwing InternalAssertionError on
/// any mismatch.
KahlerCurvatureTensor reaction_full(const KahlerCurvatureTensor& t);

// sum |Ric_{a bbar}|^2
double ricci_norm_squared(const KahlerCurvatureTensor& t);

struct FlowMonitor {
  double time;
  double scalar;
  double min_ricci_eigenvalue;
  std::optional<double> ohb_min;  // absent for n = 1 or when disabled
  bool full_certification = false;
  double tensor_norm;
  double symmetry_defect;
};

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<KahlerCurvatureTensor> states;
  std::vector<FlowMonitor> monitors;
  bool blow_up = false;
};

struct FlowOptions {
  bool monitor_ohb = true;
  int monitor_starts = 8;
  int full_starts = 64;
  double dip_threshold = 1e-6;  // cheap monitor below -dip_threshold triggers full certification
  double blow_up_cap = 1e6;
  std::uint64_t seed = 0;
};

/// Classical fixed-step RK4 for dR/dt = Q(R) from t = 0 to `horizon`, the last
/// step shortened to land on it exactly. States are re-symmetrized after every
/// step and recorded every `monitor_every` steps and at the end. Exceeding the
/// norm cap truncates the trajectory with blow_up set.
FlowTrajectory integrate(const KahlerCurvatureTensor& t0, double dt, double horizon,
                         int monitor_every = 1, const FlowOptions& opts = {});

struct ZeroSetReport {
  double quadratic_sum;    // sum (R_{a abar m vbar} R_{v mbar b bbar} - |R_{a mbar b vbar}|^2)
  double max_cross;        // max |R_{a bbar m vbar}|
  double max_partial;      // max |R_{a abar m bbar}|, |R_{b bbar m abar}|
  bool quadratic_ok;
  bool cross_ok;
  bool partial_ok;
  bool passed() const { return quadratic_ok && cross_ok && partial_ok; }
  std::string first_failure() const;
};

/// Component conditions forced at a zero of the orthogonal bisectional
/// curvature on (e_a, e_b).
ZeroSetReport zero_set_conditions(const KahlerCurvatureTensor& t, int a, int b, double tol);

}  // namespace kahler
