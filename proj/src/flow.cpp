#include "kahler/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kahler/cones.hpp"
#include "kahler/errors.hpp"

namespace kahler {

RMatrix reaction_diagonal(const KahlerCurvatureTensor& t) {
  const int n = t.dim();
  RMatrix out = RMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex s{};
      for (int m = 0; m < n; ++m)
        for (int v = 0; v < n; ++v) {
          s += t(a, a, m, v) * t(v, m, b, b) - std::norm(t(a, m, b, v)) + std::norm(t(a, b, m, v));
        }
      out(a, b) = s.real();
    }
  return out;
}

double ricci_norm_squared(const KahlerCurvatureTensor& t) { return ricci(t).squaredNorm(); }

KahlerCurvatureTensor reaction_full(const KahlerCurvatureTensor& t) {
  const int n = t.dim();
  KahlerCurvatureTensor q(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Complex s{};
          for (int m = 0; m < n; ++m)
            for (int v = 0; v < n; ++v) {
              s += t(a, b, m, v) * t(v, m, c, d) - t(a, m, c, v) * t(m, b, v, d) +
                   t(a, d, m, v) * t(v, m, c, b);
            }
          q(a, b, c, d) = s;
        }

  const double scale = 1.0 + t.norm() * t.norm();
  if (max_symmetry_defect(q) > 1e-10 * scale) {
    throw InternalAssertionError("reaction term broke the Kahler symmetries");
  }
  const RMatrix diag = reaction_diagonal(t);
  double diag_defect = 0.0;
  double double_trace = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      diag_defect = std::max(diag_defect, std::abs(q(a, a, b, b) - diag(a, b)));
      double_trace += q(a, a, b, b).real();
    }
  if (diag_defect > 1e-10 * scale) {
    throw InternalAssertionError("reaction term disagrees with its diagonal restriction");
  }
  const double ric2 = ricci_norm_squared(t);
  if (std::abs(double_trace - ric2) > 1e-9 * (1.0 + ric2)) {
    throw InternalAssertionError("reaction term double trace differs from |Ric|^2");
  }
  return q;
}

namespace {

KahlerCurvatureTensor rk4_step(const KahlerCurvatureTensor& y, double h) {
  const auto k1 = reaction_full(y);
  const auto k2 = reaction_full(y + (0.5 * h) * k1);
  const auto k3 = reaction_full(y + (0.5 * h) * k2);
  const auto k4 = reaction_full(y + h * k3);
  KahlerCurvatureTensor next = y;
  next += (h / 6.0) * k1;
  next += (h / 3.0) * k2;
  next += (h / 3.0) * k3;
  next += (h / 6.0) * k4;
  return symmetrize(next);
}

FlowMonitor make_monitor(const KahlerCurvatureTensor& state, double time, const FlowOptions& opts,
                         std::size_t record) {
  FlowMonitor m;
  m.time = time;
  m.scalar = scalar(state);
  m.min_ricci_eigenvalue = ricci_eigenvalues(state)[0];
  m.tensor_norm = state.norm();
  m.symmetry_defect = max_symmetry_defect(state);
  if (opts.monitor_ohb && state.dim() >= 2) {
    CertifyOptions cheap;
    cheap.starts = opts.monitor_starts;
    cheap.seed = opts.seed + record;
    double value = certify(state, Condition::OHB, cheap).min_value;
    if (value < -opts.dip_threshold) {
      CertifyOptions full = cheap;
      full.starts = opts.full_starts;
      value = std::min(value, certify(state, Condition::OHB, full).min_value);
      m.full_certification = true;
    }
    m.ohb_min = value;
  }
  return m;
}

}  // namespace

FlowTrajectory integrate(const KahlerCurvatureTensor& t0, double dt, double horizon,
                         int monitor_every, const FlowOptions& opts) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("time step must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw PreconditionError("horizon must be positive");
  if (monitor_every < 1) throw PreconditionError("monitor_every must be >= 1");

  FlowTrajectory traj;
  auto record = [&](const KahlerCurvatureTensor& state, double time) {
    traj.monitors.push_back(make_monitor(state, time, opts, traj.times.size()));
    traj.times.push_back(time);
    traj.states.push_back(state);
  };

  KahlerCurvatureTensor state = symmetrize(t0);
  record(state, 0.0);
  const auto steps = static_cast<long>(std::ceil(horizon / dt - 1e-9));
  for (long k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * dt;
    const double time = k == steps ? horizon : static_cast<double>(k) * dt;
    state = rk4_step(state, time - t_prev);
    const bool blown = !(state.norm() <= opts.blow_up_cap);
    if (blown || k == steps || k % monitor_every == 0) record(state, time);
    if (blown) {
      traj.blow_up = true;
      break;
    }
  }
  return traj;
}

std::string ZeroSetReport::first_failure() const {
  std::ostringstream msg;
  if (!quadratic_ok) {
    msg << "quadratic sum " << quadratic_sum << " does not vanish";
  } else if (!cross_ok) {
    msg << "cross components R_{a bbar m vbar} reach " << max_cross;
  } else if (!partial_ok) {
    msg << "components R_{a abar m bbar} / R_{b bbar m abar} reach " << max_partial;
  }
  return msg.str();
}

ZeroSetReport zero_set_conditions(const KahlerCurvatureTensor& t, int a, int b, double tol) {
  const int n = t.dim();
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
    throw PreconditionError("zero_set_conditions needs two distinct indices in range");
  }
  ZeroSetReport rep{};
  Complex quad{};
  for (int m = 0; m < n; ++m) {
    rep.max_partial = std::max({rep.max_partial, std::abs(t(a, a, m, b)), std::abs(t(b, b, m, a))});
    for (int v = 0; v < n; ++v) {
      quad += t(a, a, m, v) * t(v, m, b, b) - std::norm(t(a, m, b, v));
      rep.max_cross = std::max(rep.max_cross, std::abs(t(a, b, m, v)));
    }
  }
  rep.quadratic_sum = quad.real();
  rep.quadratic_ok = std::abs(quad) <= tol;
  rep.cross_ok = rep.max_cross <= tol;
  rep.partial_ok = rep.max_partial <= tol;
  return rep;
}

}  // namespace kahler
