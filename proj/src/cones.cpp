#include "kahler/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kahler/decomposition.hpp"
#include "kahler/errors.hpp"
#include "kahler/parallel.hpp"
#include "kahler/random.hpp"

namespace kahler {

std::string to_string(Condition c) {
  switch (c) {
    case Condition::OHB: return "OHB";
    case Condition::HB: return "HB";
    case Condition::HolSec: return "HolSec";
    case Condition::Isotropic: return "Isotropic";
  }
  return "?";
}

std::string to_string(CertificationStatus s) {
  switch (s) {
    case CertificationStatus::CertifiedNonnegative: return "CertifiedNonnegative";
    case CertificationStatus::Violated: return "Violated";
    case CertificationStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

// M(a, b) = sum_{c,d} R_{a bbar c dbar} y_c conj(y_d)
CMatrix trace_last_pair(const KahlerCurvatureTensor& t, const CVector& y) {
  const int n = t.dim();
  CMatrix m = CMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex s{};
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) s += t(a, b, c, d) * y[c] * std::conj(y[d]);
      m(a, b) = s;
    }
  return m;
}

// N(c, d) = sum_{a,b} R_{a bbar c dbar} x_a conj(x_b)
CMatrix trace_first_pair(const KahlerCurvatureTensor& t, const CVector& x) {
  const int n = t.dim();
  CMatrix m = CMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Complex w = x[a] * std::conj(x[b]);
      if (w == Complex{}) continue;
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) m(c, d) += t(a, b, c, d) * w;
    }
  return m;
}

// Gradient convention: for a real function f of complex coordinates Z the
// returned G satisfies df = Re tr(G^H dZ).
struct ComplexEval {
  double value;
  CMatrix gradient;
};

ComplexEval eval_pair(const KahlerCurvatureTensor& t, const CMatrix& frame) {
  const CVector x = frame.col(0);
  const CVector y = frame.col(1);
  const CMatrix m = trace_last_pair(t, y);
  const CMatrix nmat = trace_first_pair(t, x);
  ComplexEval out;
  out.value = (y.adjoint() * nmat.transpose() * y)(0, 0).real();
  out.gradient.resize(frame.rows(), 2);
  out.gradient.col(0) = 2.0 * m.transpose() * x;
  out.gradient.col(1) = 2.0 * nmat.transpose() * y;
  return out;
}

ComplexEval eval_holsec(const KahlerCurvatureTensor& t, const CMatrix& frame) {
  const CVector x = frame.col(0);
  const CMatrix m = trace_last_pair(t, x);
  ComplexEval out;
  out.value = (x.adjoint() * m.transpose() * x)(0, 0).real();
  out.gradient = 4.0 * m.transpose() * x;
  return out;
}

struct RealEval {
  double value;
  RMatrix gradient;
};

// Gradient of R(v0, v1, v2, v3) with respect to v[slot].
RVector slot_gradient(const RealCurvatureTensor& r, const RVector* v[4], int slot) {
  const int m = r.dim();
  RVector g = RVector::Zero(m);
  int idx[4];
  for (idx[0] = 0; idx[0] < m; ++idx[0])
    for (idx[1] = 0; idx[1] < m; ++idx[1])
      for (idx[2] = 0; idx[2] < m; ++idx[2])
        for (idx[3] = 0; idx[3] < m; ++idx[3]) {
          const double entry = r(idx[0], idx[1], idx[2], idx[3]);
          if (entry == 0.0) continue;
          double w = entry;
          for (int s = 0; s < 4; ++s) {
            if (s != slot) w *= (*v[s])[idx[s]];
          }
          g[idx[slot]] += w;
        }
  return g;
}

struct IsoTerm {
  int slots[4];
  double weight;
};

// K13 + K14 + K23 + K24 - 2 R(e1, e2, e4, e3), zero-based columns.
constexpr IsoTerm kIsotropicTerms[] = {
    {{0, 2, 2, 0}, 1.0}, {{0, 3, 3, 0}, 1.0}, {{1, 2, 2, 1}, 1.0},
    {{1, 3, 3, 1}, 1.0}, {{0, 1, 3, 2}, -2.0},
};

RealEval eval_isotropic(const RealCurvatureTensor& r, const RMatrix& frame) {
  RVector cols[4];
  for (int k = 0; k < 4; ++k) cols[k] = frame.col(k);
  RealEval out{0.0, RMatrix::Zero(frame.rows(), 4)};
  for (const auto& term : kIsotropicTerms) {
    const RVector* v[4] = {&cols[term.slots[0]], &cols[term.slots[1]], &cols[term.slots[2]],
                           &cols[term.slots[3]]};
    out.value += term.weight * r.evaluate(*v[0], *v[1], *v[2], *v[3]);
    for (int s = 0; s < 4; ++s) {
      out.gradient.col(term.slots[s]) += term.weight * slot_gradient(r, v, s);
    }
  }
  return out;
}

enum class Constraint { Stiefel, UnitColumns };

template <typename Mat>
Mat project_tangent(const Mat& frame, const Mat& grad, Constraint c) {
  if (c == Constraint::Stiefel) {
    const Mat inner = frame.adjoint() * grad;
    return grad - frame * (0.5 * (inner + inner.adjoint()));
  }
  Mat out = grad;
  for (Eigen::Index j = 0; j < frame.cols(); ++j) {
    const double radial = std::real(frame.col(j).dot(grad.col(j)));
    out.col(j) -= radial * frame.col(j);
  }
  return out;
}

template <typename Mat>
bool retract(Mat& frame, Constraint c) {
  if (c == Constraint::Stiefel) return orthonormalize_columns(frame);
  for (Eigen::Index j = 0; j < frame.cols(); ++j) {
    const double nrm = frame.col(j).norm();
    if (!(nrm > 1e-12)) return false;
    frame.col(j) /= nrm;
  }
  return true;
}

template <typename Mat>
struct Descent {
  double value;
  Mat frame;
  bool converged;
};

template <typename Mat, typename Eval>
Descent<Mat> projected_gradient(Mat frame, const Eval& eval, Constraint c, int max_iterations,
                                double scale) {
  if (!retract(frame, c)) return {std::numeric_limits<double>::quiet_NaN(), frame, false};
  auto cur = eval(frame);
  const double gtol = 1e-9 * (1.0 + scale);
  const double max_step = 10.0 / (1.0 + scale);
  double step = 0.5 / (1.0 + scale);
  Mat prev_frame, prev_rg;
  for (int it = 0; it < max_iterations; ++it) {
    if (!std::isfinite(cur.value)) return {cur.value, frame, false};
    const Mat rg = project_tangent(frame, cur.gradient, c);
    if (rg.norm() <= gtol) return {cur.value, frame, true};
    // Barzilai-Borwein trial step from the last displacement, then halve
    // until the objective decreases.
    if (it > 0) {
      const Mat ds = frame - prev_frame;
      const Mat dg = rg - prev_rg;
      const double sy = std::real((ds.adjoint() * dg).trace());
      if (sy > 0.0) step = std::min(ds.squaredNorm() / sy, max_step);
    }
    prev_frame = frame;
    prev_rg = rg;
    bool accepted = false;
    while (step > 1e-16 / (1.0 + scale)) {
      Mat cand = frame - step * rg;
      if (retract(cand, c)) {
        auto next = eval(cand);
        if (next.value < cur.value) {
          frame = std::move(cand);
          cur = std::move(next);
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    // No decrease at any representable step: stationary to machine precision.
    if (!accepted) return {cur.value, frame, true};
  }
  const Mat rg = project_tangent(frame, cur.gradient, c);
  return {cur.value, frame, rg.norm() <= 1e3 * gtol};
}

CMatrix random_complex_frame(Rng& rng, int n, int k) {
  CMatrix f(n, k);
  for (int j = 0; j < k; ++j) f.col(j) = random_complex_vector(rng, n);
  return f;
}

}  // namespace

double isotropic_value(const RealCurvatureTensor& r, const RMatrix& frame) {
  if (frame.rows() != r.dim() || frame.cols() != 4) throw StructuralError("isotropic frame must be 2n x 4");
  return eval_isotropic(r, frame).value;
}

double condition_value(const KahlerCurvatureTensor& t, Condition condition, const FrameWitness& w) {
  switch (condition) {
    case Condition::OHB:
    case Condition::HB:
      return evaluate_bisectional(t, w.vectors.col(0), w.vectors.col(1));
    case Condition::HolSec:
      return evaluate_bisectional(t, w.vectors.col(0), w.vectors.col(0));
    case Condition::Isotropic:
      return isotropic_value(realify(t), w.real_frame);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

CertificationResult certify(const KahlerCurvatureTensor& t, Condition condition,
                            const CertifyOptions& opts) {
  const int n = t.dim();
  if (opts.starts < 1 || opts.max_iterations < 1 || !(opts.tolerance > 0.0)) {
    throw PreconditionError("certify needs starts >= 1, max_iterations >= 1 and tolerance > 0");
  }
  if ((condition == Condition::OHB || condition == Condition::Isotropic) && n < 2) {
    throw PreconditionError(to_string(condition) + " certification needs complex dimension >= 2");
  }

  const double scale = t.norm();
  const auto starts = static_cast<std::size_t>(opts.starts);
  std::vector<double> values(starts);
  std::vector<bool> converged(starts);
  std::vector<FrameWitness> frames(starts);

  if (condition == Condition::Isotropic) {
    const RealCurvatureTensor r = realify(t);
    const auto eval = [&](const RMatrix& f) { return eval_isotropic(r, f); };
    parallel_for(starts, [&](std::size_t i) {
      Rng rng = make_rng(opts.seed, i);
      RMatrix f(2 * n, 4);
      for (int j = 0; j < 4; ++j) f.col(j) = random_real_vector(rng, 2 * n);
      auto run = projected_gradient(f, eval, Constraint::Stiefel, opts.max_iterations, scale);
      values[i] = run.value;
      converged[i] = run.converged;
      frames[i].real_frame = std::move(run.frame);
    });
  } else {
    const bool single = condition == Condition::HolSec;
    const Constraint c = condition == Condition::OHB ? Constraint::Stiefel : Constraint::UnitColumns;
    parallel_for(starts, [&](std::size_t i) {
      Rng rng = make_rng(opts.seed, i);
      CMatrix f = random_complex_frame(rng, n, single ? 1 : 2);
      Descent<CMatrix> run =
          single ? projected_gradient(f, [&](const CMatrix& z) { return eval_holsec(t, z); }, c,
                                      opts.max_iterations, scale)
                 : projected_gradient(f, [&](const CMatrix& z) { return eval_pair(t, z); }, c,
                                      opts.max_iterations, scale);
      values[i] = run.value;
      converged[i] = run.converged;
      frames[i].vectors = std::move(run.frame);
    });
  }

  CertificationResult result;
  result.condition = condition;
  result.starts = opts.starts;
  result.tolerance = opts.tolerance;
  result.converged_starts = static_cast<int>(std::count(converged.begin(), converged.end(), true));
  std::size_t best = starts;
  for (std::size_t i = 0; i < starts; ++i) {
    if (!std::isfinite(values[i])) continue;
    if (best == starts || values[i] < values[best]) best = i;
  }
  if (best == starts) {
    result.min_value = std::numeric_limits<double>::quiet_NaN();
    result.status = CertificationStatus::Inconclusive;
    return result;
  }
  result.min_value = values[best];
  result.argmin = frames[best];

  if (result.min_value < -opts.tolerance) {
    const double check = condition_value(t, condition, result.argmin);
    if (std::abs(check - result.min_value) > 1e-9 * (1.0 + std::abs(check))) {
      throw InternalAssertionError("certification witness does not reproduce its value");
    }
    result.status = CertificationStatus::Violated;
  } else if (result.converged_starts == opts.starts) {
    result.status = CertificationStatus::CertifiedNonnegative;
  } else {
    result.status = CertificationStatus::Inconclusive;
  }
  return result;
}

DerivedInequalityReport derived_inequalities(const KahlerCurvatureTensor& t, double tol) {
  DerivedInequalityReport rep;
  const int n = t.dim();
  rep.scalar = scalar(t);
  rep.min_value = rep.scalar;
  auto check = [&](double v, const std::string& what) {
    rep.min_value = std::min(rep.min_value, v);
    if (v < -tol) {
      std::ostringstream msg;
      msg << what << " = " << v;
      rep.failures.push_back(msg.str());
    }
  };
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double diag = t(a, a, a, a).real() + t(b, b, b, b).real();
      const double cross = t(a, b, a, b).real() + t(b, a, b, a).real();
      PairInequalities p{a, b, diag - cross, diag + cross, diag};
      std::ostringstream tag;
      tag << "(" << a << "," << b << ")";
      check(p.sum_minus, "rotated-frame sum " + tag.str());
      check(p.sum_plus, "imaginary rotated-frame sum " + tag.str());
      check(p.diagonal, "holomorphic sectional pair sum " + tag.str());
      rep.pairs.push_back(p);
    }
  }
  check(rep.scalar, "scalar curvature");
  return rep;
}

bool CrossFactorReport::any_flagged() const {
  return std::any_of(pairs.begin(), pairs.end(), [](const CrossFactorPair& p) { return p.flagged; });
}

CrossFactorReport cross_factor_bound(const KahlerCurvatureTensor& t, const ProductStructure& blocks,
                                     double tol, const CertifyOptions& opts) {
  const KahlerCurvatureTensor adapted = conjugate_frame(t, blocks.change_of_frame);
  const double mixed = max_mixed_component(t, blocks);
  if (mixed > tol) {
    std::ostringstream msg;
    msg << "tensor is not block diagonal for the given structure (mixed component " << mixed << ")";
    throw StructuralError(msg.str());
  }
  CrossFactorReport rep;
  for (const auto& block : blocks.blocks) {
    const auto sub = restrict_to_block(adapted, block.indices);
    const double m = sub.dim() == 1 ? sub(0, 0, 0, 0).real()
                                    : certify(sub, Condition::HolSec, opts).min_value;
    rep.block_min_holomorphic_sectional.push_back(m);
  }
  const int k = static_cast<int>(blocks.blocks.size());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      const double s = rep.block_min_holomorphic_sectional[i] + rep.block_min_holomorphic_sectional[j];
      rep.pairs.push_back({i, j, s, s < -tol});
    }
  return rep;
}

}  // namespace kahler
